// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use holospin_cli::{run, CliError, CommandKind, Format, Overrides, RunConfig, RunOutput};

/// Holonomic two-qubit gates on a three-spin chain: gate reports,
/// invariant sweeps and noise studies.
#[derive(Debug, Parser)]
#[command(name = "holospin", version)]
struct Cli {
    #[arg(value_enum)]
    command: CommandKind,

    /// JSON run configuration; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output path prefix; results go to stdout when omitted.
    #[arg(long)]
    out: Option<String>,

    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Points per sweep axis.
    #[arg(long)]
    grid: Option<usize>,

    /// Time steps for time-ordered propagation.
    #[arg(long)]
    steps: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    /// 4x4 gate file for `classify`.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match try_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("holospin: {e}");
            if let Some(hint) = e.hint() {
                eprintln!("hint: {hint}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn try_main(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply(Overrides {
        command: Some(cli.command),
        output: cli.out,
        format: cli.format,
        grid: cli.grid,
        steps: cli.steps,
        seed: cli.seed,
        matrix: cli.matrix,
    });
    match run(&cfg)? {
        RunOutput::Stdout(text) => print!("{text}"),
        RunOutput::Files(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}
