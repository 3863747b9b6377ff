// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: configuration, reports, CSV and SVG output.

pub mod commands;
pub mod config;
pub mod error;
pub mod matrix_file;
pub mod svg;

use std::path::{Path, PathBuf};

pub use commands::{execute, Artifact};
pub use config::{CommandKind, Format, Overrides, RunConfig};
pub use error::CliError;

/// Where each artifact goes: `<prefix>.<ext>`, plus the config sidecar.
pub fn output_paths(prefix: &str, artifacts: &[Artifact]) -> (Vec<PathBuf>, PathBuf) {
    let files = artifacts.iter().map(|a| PathBuf::from(format!("{prefix}.{}", a.extension))).collect();
    (files, PathBuf::from(format!("{prefix}.config.json")))
}

/// Runs one configured command. With an output prefix, writes every artifact
/// and a JSON echo of the effective configuration, returning the paths;
/// without one, returns the primary artifact's text for stdout.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let artifacts = execute(cfg)?;
    match &cfg.output {
        None => Ok(RunOutput::Stdout(artifacts.iter().rev().map(|a| a.contents.clone()).next().unwrap_or_default())),
        Some(prefix) => {
            let (files, sidecar) = output_paths(prefix, &artifacts);
            if let Some(dir) = Path::new(prefix).parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            for (a, path) in artifacts.iter().zip(&files) {
                std::fs::write(path, &a.contents)?;
            }
            std::fs::write(&sidecar, cfg.to_json() + "\n")?;
            let mut written = files;
            written.push(sidecar);
            Ok(RunOutput::Files(written))
        }
    }
}

#[derive(Debug)]
pub enum RunOutput {
    Stdout(String),
    Files(Vec<PathBuf>),
}
