// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: a flat JSON file, overridden by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use holospin_core::noise::{HyperfineBath, NoiseConfig};
use holospin_core::propagation::{cyclic_area, solve_cyclic, PulsePlan, PulseShape, DEFAULT_STEPS};
use holospin_core::spin::ExchangeCouplings;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Gate,
    SweepTheta,
    SweepDm,
    SweepNoise,
    SweepDephasing,
    Classify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gate => "gate",
            Self::SweepTheta => "sweep-theta",
            Self::SweepDm => "sweep-dm",
            Self::SweepNoise => "sweep-noise",
            Self::SweepDephasing => "sweep-dephasing",
            Self::Classify => "classify",
        }
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Svg,
}

/// Pulse parameters before calibration against the couplings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    #[serde(default = "square")]
    pub shape: PulseShape,
    /// Square pulses: the height, from which the duration follows.
    /// Shaped pulses: rescaled so that the area is cyclic.
    #[serde(default = "one")]
    pub amplitude: f64,
    /// Required for tabulated pulses; defaults to 1 for gaussians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    #[serde(default)]
    pub winding: u32,
}

fn square() -> PulseShape {
    PulseShape::Square
}

fn one() -> f64 {
    1.0
}

impl Default for PulseSpec {
    fn default() -> Self {
        Self { shape: PulseShape::Square, amplitude: 1.0, duration: None, winding: 0 }
    }
}

impl PulseSpec {
    /// Cyclic pulse for a chain whose couplings give `omega`.
    pub fn calibrate(&self, omega: f64) -> holospin_core::Result<PulsePlan> {
        match self.shape {
            PulseShape::Square => solve_cyclic(omega, self.amplitude, self.winding),
            _ => {
                let duration = self.duration.unwrap_or(1.0);
                PulsePlan::new(self.shape.clone(), self.amplitude, duration, self.winding)?
                    .with_total_area(cyclic_area(omega, self.winding)?)
            }
        }
    }
}

fn default_couplings() -> ExchangeCouplings {
    ExchangeCouplings::xy(1.0, 1.0)
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,
    #[serde(default = "default_couplings")]
    pub couplings: ExchangeCouplings,
    #[serde(default)]
    pub pulse: PulseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub format: Format,
    /// Recorded with every run; no command currently draws random numbers.
    #[serde(default)]
    pub seed: u64,
    /// Points per axis; replaces any axis lists given under `noise`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// 4x4 gate file for `classify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            couplings: default_couplings(),
            pulse: PulseSpec::default(),
            noise: None,
            output: None,
            format: Format::Csv,
            seed: 0,
            grid: None,
            steps: DEFAULT_STEPS,
            matrix: None,
        }
    }
}

/// Values given on the command line; each `Some` replaces the file value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<CommandKind>,
    pub output: Option<String>,
    pub format: Option<Format>,
    pub grid: Option<usize>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub matrix: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn apply(&mut self, o: Overrides) {
        if o.command.is_some() {
            self.command = o.command;
        }
        if o.output.is_some() {
            self.output = o.output;
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        if o.grid.is_some() {
            self.grid = o.grid;
        }
        if let Some(s) = o.steps {
            self.steps = s;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if o.matrix.is_some() {
            self.matrix = o.matrix;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.command.is_none() {
            return Err(CliError::Config("no command given".into()));
        }
        if self.steps == 0 {
            return Err(CliError::Config("steps: must be at least 1".into()));
        }
        if let Some(g) = self.grid {
            if g < 2 {
                return Err(CliError::Config(format!("grid: must be at least 2, got {g}")));
            }
        }
        let cp = &self.couplings;
        if ![cp.j1, cp.j2, cp.d1, cp.d2].iter().all(|x| x.is_finite()) {
            return Err(CliError::Config("couplings: values must be finite".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run configuration serializes")
    }
}

/// `n` points from `lo` to `hi` spaced evenly in log scale.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|k| if n == 1 { lo } else { 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64) }).collect()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect()
}

pub const DEFAULT_THETA_GRID: usize = 101;
pub const DEFAULT_NOISE_GRID: usize = 21;
pub const DEFAULT_LAMBDA_GRID: usize = 20;

/// Default ratio axis: log-spaced from `lo` to `hi`, ending at the noise-free point.
fn ratio_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v = logspace(lo, hi, n - 1);
    v.push(f64::INFINITY);
    v
}

pub fn dm_axes(cfg: &RunConfig) -> (Vec<f64>, Vec<f64>) {
    match (&cfg.noise, cfg.grid) {
        (Some(NoiseConfig::Dm { d1_ratios, d2_ratios }), None) => (d1_ratios.clone(), d2_ratios.clone()),
        (_, g) => {
            let axis = ratio_axis(1.0, 1e3, g.unwrap_or(DEFAULT_NOISE_GRID));
            (axis.clone(), axis)
        }
    }
}

pub fn amplitude_axes(cfg: &RunConfig) -> (Vec<f64>, Vec<f64>) {
    match (&cfg.noise, cfg.grid) {
        (Some(NoiseConfig::Amplitude { ratios1, ratios2 }), None) => (ratios1.clone(), ratios2.clone()),
        (_, g) => {
            let axis = ratio_axis(10.0, 1e4, g.unwrap_or(DEFAULT_NOISE_GRID));
            (axis.clone(), axis)
        }
    }
}

pub fn dephasing_axis(cfg: &RunConfig) -> (HyperfineBath, Vec<f64>) {
    let (bath, lambdas) = match &cfg.noise {
        Some(NoiseConfig::Dephasing { bath, lambdas }) => (*bath, Some(lambdas.clone())),
        _ => (HyperfineBath::new(2, 1.0, 1.0), None),
    };
    let lambdas = match (lambdas, cfg.grid) {
        (Some(l), None) => l,
        (_, g) => linspace(1.0, 20.0, g.unwrap_or(DEFAULT_LAMBDA_GRID)),
    };
    (bath, lambdas)
}

/// Rejects a noise block that belongs to a different command.
pub fn check_noise_family(cfg: &RunConfig, cmd: CommandKind) -> Result<(), CliError> {
    let ok = matches!(
        (&cfg.noise, cmd),
        (None, _)
            | (Some(NoiseConfig::Dm { .. }), CommandKind::SweepDm)
            | (Some(NoiseConfig::Amplitude { .. }), CommandKind::SweepNoise)
            | (Some(NoiseConfig::Dephasing { .. }), CommandKind::SweepDephasing)
    );
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("noise: family does not match command {cmd}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let err = RunConfig::from_json("{\n  \"couplings\": {\"j1\": 1, \"j2\": 1, \"jj\": 2}\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2") && msg.contains("jj"), "{msg}");
        assert!(RunConfig::from_json(r#"{"stepz": 3}"#).is_err());
        assert!(RunConfig::from_json(r#"{"pulse": {"amplitude": 1, "width": 2}}"#).is_err());
    }

    #[test]
    fn overrides_win() {
        let mut cfg = RunConfig::from_json(r#"{"steps": 10, "grid": 5, "format": "json"}"#).unwrap();
        cfg.apply(Overrides { steps: Some(20), format: Some(Format::Svg), ..Default::default() });
        assert_eq!((cfg.steps, cfg.grid, cfg.format), (20, Some(5), Format::Svg));
    }

    #[test]
    fn round_trip_with_noise() {
        let text = r#"{
            "command": "sweep-noise",
            "couplings": {"j1": 1.0, "j2": 0.5, "d1": 0.1, "d2": 0.0},
            "pulse": {"shape": {"kind": "gaussian", "width": 0.2}, "amplitude": 2.0, "duration": 3.0, "winding": 1},
            "noise": {"family": "amplitude", "ratios1": [10, "inf"], "ratios2": [100]},
            "output": "out/x",
            "seed": 7
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn default_axes() {
        let cfg = RunConfig { grid: Some(4), ..Default::default() };
        let (a, _) = amplitude_axes(&cfg);
        assert_eq!(a.len(), 4);
        assert!(a[3].is_infinite());
        assert!((a[0] - 10.0).abs() < 1e-12 && (a[2] - 1e4).abs() < 1e-9);
        let (_, l) = dephasing_axis(&RunConfig::default());
        assert_eq!(l, (1..=20).map(f64::from).collect::<Vec<_>>());
    }

    #[test]
    fn shaped_pulse_is_rescaled_to_cyclic_area() {
        let spec = PulseSpec { shape: PulseShape::Gaussian { width: 0.2 }, duration: Some(2.0), ..Default::default() };
        let plan = spec.calibrate(0.8).unwrap();
        assert!((plan.total_area() * 0.8 - std::f64::consts::PI).abs() < 1e-9);
        assert_eq!(plan.duration, 2.0);
    }
}
