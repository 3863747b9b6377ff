// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_4;
use std::fmt::Write;

use holospin_core::holonomy::{analytic_entangler_for, extract_register_gate, GateEntries, RegisterGate};
use holospin_core::metrics::{gate_metrics, GateMetrics};
use holospin_core::noise::{amplitude_noise_sweep, dephasing_sweep, dm_sweep, SweepTable};
use holospin_core::numerics::{svd, CMatrix};
use holospin_core::propagation::{propagate_plan, PulsePlan};
use holospin_core::spin::{build_hamiltonians, couplings_to_polar, ExchangeCouplings, PolarCouplings};
use holospin_core::Error;
use serde::Serialize;

use crate::config::{
    amplitude_axes, check_noise_family, dephasing_axis, dm_axes, CommandKind, Format, RunConfig, DEFAULT_THETA_GRID,
};
use crate::error::CliError;
use crate::matrix_file::parse_matrix;
use crate::svg;

/// Unitarity accepted from gate files; the input is then projected onto the
/// nearest unitary before its invariants are computed.
pub const FILE_UNITARY_TOL: f64 = 1e-8;

/// Round-trip-safe CSV number: 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// A rendered output: file extension and contents.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub extension: &'static str,
    pub contents: String,
}

fn artifact(extension: &'static str, contents: String) -> Artifact {
    Artifact { extension, contents }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub g1: [f64; 2],
    pub g2: f64,
    pub weyl: [f64; 3],
    pub ep: f64,
    pub class: String,
}

impl From<&GateMetrics> for MetricsReport {
    fn from(m: &GateMetrics) -> Self {
        Self { g1: [m.g1.re, m.g1.im], g2: m.g2, weyl: m.weyl, ep: m.ep, class: m.entangler_class.to_string() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GateReport {
    pub couplings: ExchangeCouplings,
    pub polar: PolarCouplings,
    pub pulse: PulsePlan,
    pub gate: GateEntries,
    pub leakage: f64,
    /// max entrywise |simulated - analytic|.
    pub deviation: f64,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub gate: GateEntries,
    pub unitarity_deviation: f64,
    pub metrics: MetricsReport,
}

fn metrics_rows(out: &mut String, m: &MetricsReport) {
    let _ = writeln!(out, "g1_re,{}", num(m.g1[0]));
    let _ = writeln!(out, "g1_im,{}", num(m.g1[1]));
    let _ = writeln!(out, "g2,{}", num(m.g2));
    for (k, c) in m.weyl.iter().enumerate() {
        let _ = writeln!(out, "c{},{}", k + 1, num(*c));
    }
    let _ = writeln!(out, "ep,{}", num(m.ep));
    let _ = writeln!(out, "class,{}", m.class);
}

fn matrix_rows(out: &mut String, g: &GateEntries) {
    for (i, row) in g.0.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let _ = writeln!(out, "u{i}{j}_re,{}", num(z[0]));
            let _ = writeln!(out, "u{i}{j}_im,{}", num(z[1]));
        }
    }
}

fn simulate(cp: &ExchangeCouplings, cfg: &RunConfig) -> Result<(PolarCouplings, PulsePlan, RegisterGate), CliError> {
    let polar = couplings_to_polar(cp)?;
    let plan = cfg.pulse.calibrate(polar.omega)?;
    let u = propagate_plan(&build_hamiltonians(cp), &plan, cfg.steps)?;
    Ok((polar, plan, extract_register_gate(&u)?))
}

pub fn cmd_gate(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let (polar, pulse, gate) = simulate(&cfg.couplings, cfg)?;
    let deviation = gate.matrix.max_abs_diff(&analytic_entangler_for(&polar).matrix);
    let metrics = gate_metrics(&gate.matrix)?;
    let report = GateReport {
        couplings: cfg.couplings,
        polar,
        pulse,
        gate: GateEntries::from(&gate.matrix),
        leakage: gate.leakage,
        deviation,
        metrics: MetricsReport::from(&metrics),
    };
    match cfg.format {
        Format::Json => Ok(vec![artifact("json", json(&report))]),
        Format::Csv => {
            let mut out = String::from("quantity,value\n");
            for (k, v) in [
                ("omega", polar.omega),
                ("theta", polar.theta),
                ("phi1", polar.phi1),
                ("phi2", polar.phi2),
                ("leakage", report.leakage),
                ("deviation", report.deviation),
            ] {
                let _ = writeln!(out, "{k},{}", num(v));
            }
            metrics_rows(&mut out, &report.metrics);
            matrix_rows(&mut out, &report.gate);
            Ok(vec![artifact("csv", out)])
        }
        Format::Svg => Err(CliError::Config("format: svg is only available for sweeps".into())),
    }
}

/// Nearest unitary `u v^dagger` from the SVD `m = u s v^dagger`.
fn nearest_unitary(m: &CMatrix) -> CMatrix {
    let d = svd(m);
    &d.u * &d.v.adjoint()
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let path = cfg
        .matrix
        .as_ref()
        .ok_or_else(|| CliError::Config("classify needs a gate file (--matrix or \"matrix\")".into()))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let m = parse_matrix(&text).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    let deviation = m.unitarity_deviation();
    if !(deviation <= FILE_UNITARY_TOL) {
        return Err(Error::NonUnitaryInput { deviation }.into());
    }
    let metrics = gate_metrics(&nearest_unitary(&m))?;
    let report = ClassifyReport {
        gate: GateEntries::from(&m),
        unitarity_deviation: deviation,
        metrics: MetricsReport::from(&metrics),
    };
    match cfg.format {
        Format::Json => Ok(vec![artifact("json", json(&report))]),
        Format::Csv => {
            let mut out = String::from("quantity,value\n");
            let _ = writeln!(out, "unitarity_deviation,{}", num(deviation));
            metrics_rows(&mut out, &report.metrics);
            Ok(vec![artifact("csv", out)])
        }
        Format::Svg => Err(CliError::Config("format: svg is only available for sweeps".into())),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaRow {
    pub theta: f64,
    pub ep: f64,
    pub g1_re: f64,
    pub g1_im: f64,
    pub g2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub class: String,
}

pub const THETA_HEADER: &str = "theta,ep,g1_re,g1_im,g2,c1,c2,c3,class";

pub fn theta_rows(cfg: &RunConfig) -> Result<Vec<ThetaRow>, CliError> {
    let n = cfg.grid.unwrap_or(DEFAULT_THETA_GRID);
    let omega = cfg.couplings.omega();
    if !(omega > 0.0) {
        return Err(Error::ZeroCoupling.into());
    }
    (0..n)
        .map(|k| {
            let theta = FRAC_PI_4 * k as f64 / (n - 1) as f64;
            let (_, _, gate) = simulate(&ExchangeCouplings::for_theta(theta, omega), cfg)?;
            let m = gate_metrics(&gate.matrix)?;
            Ok(ThetaRow {
                theta,
                ep: m.ep,
                g1_re: m.g1.re,
                g1_im: m.g1.im,
                g2: m.g2,
                c1: m.weyl[0],
                c2: m.weyl[1],
                c3: m.weyl[2],
                class: m.entangler_class.to_string(),
            })
        })
        .collect()
}

pub fn cmd_sweep_theta(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let rows = theta_rows(cfg)?;
    let mut csv = format!("{THETA_HEADER}\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            num(r.theta),
            num(r.ep),
            num(r.g1_re),
            num(r.g1_im),
            num(r.g2),
            num(r.c1),
            num(r.c2),
            num(r.c3),
            r.class
        );
    }
    Ok(match cfg.format {
        Format::Csv => vec![artifact("csv", csv)],
        Format::Json => vec![artifact("json", json(&rows))],
        Format::Svg => {
            let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.theta, r.ep)).collect();
            let plot = svg::line_plot("Entangling power of the holonomic gate", "\u{3b8}", "e_p", &pts);
            vec![artifact("csv", csv), artifact("svg", plot)]
        }
    })
}

/// CSV of a sweep table with the given column names for its axes.
pub fn table_csv(table: &SweepTable, columns: &[&str]) -> String {
    let mut out = format!("{},fidelity\n", columns.join(","));
    for (coords, f) in table.rows() {
        let cells: Vec<String> = coords.iter().map(|x| num(*x)).collect();
        let _ = writeln!(out, "{},{}", cells.join(","), num(f));
    }
    out
}

fn sweep_artifacts(
    cfg: &RunConfig,
    table: &SweepTable,
    columns: &[&str],
    labels: &[&str],
    title: &str,
) -> Vec<Artifact> {
    let csv = table_csv(table, columns);
    match cfg.format {
        Format::Csv => vec![artifact("csv", csv)],
        Format::Json => vec![artifact("json", json(table))],
        Format::Svg => {
            let plot = if table.axes.len() == 2 {
                svg::heatmap(title, labels[0], labels[1], &table.axes[0].values, &table.axes[1].values, &table.fidelity)
            } else {
                let pts: Vec<(f64, f64)> =
                    table.axes[0].values.iter().copied().zip(table.fidelity.iter().copied()).collect();
                svg::line_plot(title, labels[0], "F", &pts)
            };
            vec![artifact("csv", csv), artifact("svg", plot)]
        }
    }
}

pub fn cmd_sweep_dm(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    check_noise_family(cfg, CommandKind::SweepDm)?;
    let (d1, d2) = dm_axes(cfg);
    let xy = cfg.couplings.xy_part();
    let pulse = cfg.pulse.calibrate(xy.omega())?;
    let table = dm_sweep(xy.j1, xy.j2, &d1, &d2, &pulse)?;
    Ok(sweep_artifacts(cfg, &table, &["d1", "d2"], &["d_1", "d_2"], "Fidelity under DM perturbation"))
}

pub fn cmd_sweep_noise(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    check_noise_family(cfg, CommandKind::SweepNoise)?;
    let (r1, r2) = amplitude_axes(cfg);
    let pulse = cfg.pulse.calibrate(cfg.couplings.omega())?;
    let table = amplitude_noise_sweep(&cfg.couplings, &r1, &r2, &pulse, cfg.steps)?;
    Ok(sweep_artifacts(
        cfg,
        &table,
        &["ratio1", "ratio2"],
        &["\u{3a9}/\u{3b4}_1", "\u{3a9}/\u{3b4}_2"],
        "Fidelity under arm-amplitude noise",
    ))
}

pub fn cmd_sweep_dephasing(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    check_noise_family(cfg, CommandKind::SweepDephasing)?;
    let (bath, lambdas) = dephasing_axis(cfg);
    let table = dephasing_sweep(&bath, &lambdas, &cfg.couplings, cfg.steps)?;
    Ok(sweep_artifacts(cfg, &table, &["lambda"], &["\u{3bb}"], "Fidelity under hyperfine dephasing"))
}

pub fn execute(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    cfg.validate()?;
    match cfg.command.expect("validated") {
        CommandKind::Gate => cmd_gate(cfg),
        CommandKind::SweepTheta => cmd_sweep_theta(cfg),
        CommandKind::SweepDm => cmd_sweep_dm(cfg),
        CommandKind::SweepNoise => cmd_sweep_noise(cfg),
        CommandKind::SweepDephasing => cmd_sweep_dephasing(cfg),
        CommandKind::Classify => cmd_classify(cfg),
    }
}
