// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! Robustness of the entangler against static DM terms, arm-amplitude
//! noise and hyperfine dephasing from a nuclear-spin bath.
//!
//! Fidelities are process fidelities on the register block,
//! `F = sum_k |tr(V^dag M_k)|^2 / 16`. The average gate fidelity follows as
//! `(4 F + 1) / 5`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomy::{analytic_entangler_for, extract_register_gate, RegisterGate};
use crate::numerics::{kron, kron_all, CMatrix};
use crate::propagation::{
    check_cyclic, cyclic_area, propagator_closed_form, propagator_time_ordered, Envelope, PulsePlan, Term,
};
use crate::spin::{
    arm_hamiltonians, build_hamiltonians, couplings_to_polar, sx, sy, sz, ExchangeCouplings, FULL_DIM, N_SITES,
    REGISTER_DIM,
};

pub const DEFAULT_NUCLEI_PER_ELECTRON: usize = 2;
pub const DEFAULT_DIMENSION_CAP: usize = 4096;
pub const TARGET_LEAKAGE_TOL: f64 = 1e-10;
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// JSON helpers for value lists that may contain `inf` (a noise-free point).
pub mod extended_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    fn to_repr(x: f64) -> Repr {
        if x.is_finite() {
            Repr::Num(x)
        } else if x.is_nan() {
            Repr::Text("nan".into())
        } else if x > 0.0 {
            Repr::Text("inf".into())
        } else {
            Repr::Text("-inf".into())
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(x) => Ok(x),
            Repr::Text(s) => match s.as_str() {
                "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                _ => Err(E::custom(format!("expected a number or \"inf\", got {s:?}"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| to_repr(*x)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
    }
}

/// One noise family and its sweep grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseConfig {
    /// `d_i = sqrt(J1^2 + J2^2) / D_i`; `inf` switches the DM term off.
    Dm {
        #[serde(with = "extended_f64")]
        d1_ratios: Vec<f64>,
        #[serde(with = "extended_f64")]
        d2_ratios: Vec<f64>,
    },
    /// `ratio_i = Omega / delta_i`; `inf` is the noise-free arm.
    Amplitude {
        #[serde(with = "extended_f64")]
        ratios1: Vec<f64>,
        #[serde(with = "extended_f64")]
        ratios2: Vec<f64>,
    },
    Dephasing {
        bath: HyperfineBath,
        #[serde(with = "extended_f64")]
        lambdas: Vec<f64>,
    },
}

/// Homogeneous hyperfine bath: every electron couples to its own
/// `nuclei_per_electron` spin-1/2 nuclei with strength `A / N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperfineBath {
    #[serde(default = "default_nuclei")]
    pub nuclei_per_electron: usize,
    pub op_time: f64,
    /// `tau_hf / tau_op = N / (A tau_op)`.
    pub lambda: f64,
    #[serde(default = "default_cap")]
    pub dimension_cap: usize,
}

fn default_nuclei() -> usize {
    DEFAULT_NUCLEI_PER_ELECTRON
}

fn default_cap() -> usize {
    DEFAULT_DIMENSION_CAP
}

impl HyperfineBath {
    pub fn new(nuclei_per_electron: usize, op_time: f64, lambda: f64) -> Self {
        Self { nuclei_per_electron, op_time, lambda, dimension_cap: DEFAULT_DIMENSION_CAP }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..*self }
    }

    /// `A = N / (lambda tau_op)`; zero when `lambda` is infinite.
    pub fn total_coupling(&self) -> f64 {
        if self.lambda.is_infinite() {
            0.0
        } else {
            self.nuclei_per_electron as f64 / (self.lambda * self.op_time)
        }
    }

    pub fn per_nucleus_coupling(&self) -> f64 {
        self.total_coupling() / self.nuclei_per_electron as f64
    }

    pub fn bath_dim(&self) -> usize {
        1usize << (N_SITES * self.nuclei_per_electron).min(usize::BITS as usize - 1)
    }

    pub fn full_dim(&self) -> usize {
        FULL_DIM.saturating_mul(self.bath_dim())
    }

    fn validate(&self) -> Result<()> {
        if self.nuclei_per_electron == 0 {
            return Err(Error::InvalidParameter("nuclei_per_electron must be at least 1".into()));
        }
        if !(self.op_time > 0.0 && self.op_time.is_finite()) {
            return Err(Error::InvalidParameter(format!("op_time must be positive, got {}", self.op_time)));
        }
        if !(self.lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {}", self.lambda)));
        }
        let dim = self.full_dim();
        if N_SITES * self.nuclei_per_electron >= usize::BITS as usize - 4 || dim > self.dimension_cap {
            return Err(Error::DimensionOverflow { dim, cap: self.dimension_cap });
        }
        Ok(())
    }
}

/// `sum_l (A/N) sum_k S^(l) . I^(l,k)` on system (x) bath.
///
/// Factor order: ancilla, register 1, register 2, then the nuclei of the
/// ancilla, of register 1 and of register 2.
pub fn build_hyperfine_hamiltonian(bath: &HyperfineBath) -> Result<CMatrix> {
    bath.validate()?;
    let n = bath.nuclei_per_electron;
    let sites = N_SITES * (1 + n);
    let dim = bath.full_dim();
    let a = bath.per_nucleus_coupling();
    let mut h = CMatrix::zeros(dim, dim);
    if a == 0.0 {
        return Ok(h);
    }
    let id = CMatrix::identity(2);
    let spins = [sx(), sy(), sz()];
    for electron in 0..N_SITES {
        for k in 0..n {
            let nucleus = N_SITES + electron * n + k;
            for s in &spins {
                let factors: Vec<&CMatrix> =
                    (0..sites).map(|site| if site == electron || site == nucleus { s } else { &id }).collect();
                h += &kron_all(factors).scale_real(a);
            }
        }
    }
    Ok(h)
}

/// Total `S_z` of electrons and nuclei on the system (x) bath space.
pub fn total_sz(bath: &HyperfineBath) -> CMatrix {
    let sites = N_SITES * (1 + bath.nuclei_per_electron);
    let id = CMatrix::identity(2);
    let z = sz();
    let dim = 1usize << sites;
    let mut out = CMatrix::zeros(dim, dim);
    for site in 0..sites {
        let factors: Vec<&CMatrix> = (0..sites).map(|k| if k == site { &z } else { &id }).collect();
        out += &kron_all(factors);
    }
    out
}

#[derive(Debug, Clone)]
pub struct QuantumChannel {
    pub kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    /// `max |sum_k M_k^dag M_k - 1|`.
    pub fn completeness_deviation(&self) -> f64 {
        let Some(first) = self.kraus.first() else {
            return f64::INFINITY;
        };
        let n = first.cols();
        let mut sum = CMatrix::zeros(n, n);
        for m in &self.kraus {
            sum += &(&m.adjoint() * m);
        }
        sum.max_abs_diff(&CMatrix::identity(n))
    }

    /// Kraus operators of the reduced system map for a unitary on
    /// system (x) bath with the bath maximally mixed:
    /// `M_ij = <j| U |i>_bath / sqrt(bath_dim)`.
    pub fn from_dilation(u: &CMatrix, system_dim: usize) -> Result<Self> {
        if u.rows() != u.cols() || !u.rows().is_multiple_of(system_dim) {
            return Err(Error::DimensionMismatch {
                expected: format!("square multiple of {system_dim}"),
                actual: format!("{}x{}", u.rows(), u.cols()),
            });
        }
        let bath = u.rows() / system_dim;
        let norm = 1.0 / (bath as f64).sqrt();
        let mut kraus = Vec::with_capacity(bath * bath);
        for i in 0..bath {
            for j in 0..bath {
                kraus.push(CMatrix::from_fn(system_dim, system_dim, |r, c| u[(r * bath + j, c * bath + i)] * norm));
            }
        }
        Ok(Self { kraus })
    }
}

/// Anything whose action on the register block is a set of Kraus operators.
pub trait RegisterProcess {
    fn register_kraus(&self) -> Vec<CMatrix>;
}

impl RegisterProcess for RegisterGate {
    fn register_kraus(&self) -> Vec<CMatrix> {
        vec![self.matrix.clone()]
    }
}

impl RegisterProcess for QuantumChannel {
    fn register_kraus(&self) -> Vec<CMatrix> {
        self.kraus
            .iter()
            .map(|m| if m.rows() == REGISTER_DIM { m.clone() } else { m.block(0, 0, REGISTER_DIM, REGISTER_DIM) })
            .collect()
    }
}

pub fn process_fidelity<P: RegisterProcess + ?Sized>(target: &RegisterGate, actual: &P) -> Result<f64> {
    if target.leakage > TARGET_LEAKAGE_TOL || !target.is_unitary(TARGET_LEAKAGE_TOL) {
        return Err(Error::NonUnitaryTarget { leakage: target.leakage.max(target.matrix.unitarity_deviation()) });
    }
    let vd = target.matrix.adjoint();
    let d2 = (REGISTER_DIM * REGISTER_DIM) as f64;
    let f: f64 = actual.register_kraus().iter().map(|m| (&vd * m).trace().norm_sqr()).sum::<f64>() / d2;
    Ok(f.clamp(0.0, 1.0))
}

/// A named axis of sweep values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    #[serde(with = "extended_f64")]
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        Self { name: name.into(), values }
    }
}

/// Inputs of a sweep, kept alongside its results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "sweep", rename_all = "snake_case")]
pub enum SweepConfig {
    Dm { j1: f64, j2: f64, pulse: PulsePlan },
    Amplitude { couplings: ExchangeCouplings, pulse: PulsePlan },
    Dephasing { bath: HyperfineBath, couplings: ExchangeCouplings, steps: usize },
}

/// Fidelity on a grid; `fidelity` is row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub config: SweepConfig,
    pub axes: Vec<Axis>,
    pub fidelity: Vec<f64>,
}

impl SweepTable {
    pub fn len(&self) -> usize {
        self.fidelity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fidelity.is_empty()
    }

    /// Fidelity at the multi-index `idx` (one entry per axis).
    pub fn at(&self, idx: &[usize]) -> f64 {
        let mut flat = 0;
        for (axis, &i) in self.axes.iter().zip(idx) {
            flat = flat * axis.values.len() + i;
        }
        self.fidelity[flat]
    }

    /// `(coordinates, fidelity)` for every grid point in storage order.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<f64>, f64)> + '_ {
        self.fidelity.iter().enumerate().map(move |(mut flat, &f)| {
            let mut coords = vec![0.0; self.axes.len()];
            for (k, axis) in self.axes.iter().enumerate().rev() {
                let n = axis.values.len();
                coords[k] = axis.values[flat % n];
                flat /= n;
            }
            (coords, f)
        })
    }
}

fn grid2(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

fn check_ratios(name: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidParameter(format!("{name} is empty")));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::InvalidParameter(format!("{name} entries must be positive, got {v}")));
    }
    Ok(())
}

/// `x / ratio`, with an infinite ratio meaning no perturbation.
fn inverse_ratio(x: f64, ratio: f64) -> f64 {
    if ratio.is_infinite() {
        0.0
    } else {
        x / ratio
    }
}

/// DM terms `D_i = sqrt(J1^2 + J2^2) / d_i` added to an XY chain whose pulse
/// was calibrated without them.
pub fn dm_sweep(j1: f64, j2: f64, d1_ratios: &[f64], d2_ratios: &[f64], pulse: &PulsePlan) -> Result<SweepTable> {
    check_ratios("d1_ratios", d1_ratios)?;
    check_ratios("d2_ratios", d2_ratios)?;
    let xy = ExchangeCouplings::xy(j1, j2);
    let polar = couplings_to_polar(&xy)?;
    let area = pulse.total_area();
    check_cyclic(area, polar.omega)?;
    let target = analytic_entangler_for(&polar);
    let scale = j1.hypot(j2);

    let fidelity = grid2(d1_ratios, d2_ratios)
        .into_par_iter()
        .map(|(d1, d2)| {
            let cp = ExchangeCouplings::new(j1, j2, inverse_ratio(scale, d1), inverse_ratio(scale, d2));
            let u = propagator_closed_form(&build_hamiltonians(&cp), area);
            process_fidelity(&target, &extract_register_gate(&u)?)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepTable {
        config: SweepConfig::Dm { j1, j2, pulse: pulse.clone() },
        axes: vec![Axis::new("d1", d1_ratios.to_vec()), Axis::new("d2", d2_ratios.to_vec())],
        fidelity,
    })
}

/// Arm amplitudes `Omega_i(t) = Omega(t) (1 + 1/ratio_i)`, i.e. `delta_i = Omega / ratio_i`.
pub fn amplitude_noise_sweep(
    couplings: &ExchangeCouplings,
    ratios1: &[f64],
    ratios2: &[f64],
    pulse: &PulsePlan,
    steps: usize,
) -> Result<SweepTable> {
    check_ratios("ratios1", ratios1)?;
    check_ratios("ratios2", ratios2)?;
    let polar = couplings_to_polar(couplings)?;
    check_cyclic(pulse.total_area(), polar.omega)?;
    let target = analytic_entangler_for(&polar);
    let (arm1, arm2) = arm_hamiltonians(couplings);

    let fidelity = grid2(ratios1, ratios2)
        .into_par_iter()
        .map(|(r1, r2)| {
            let (k1, k2) = (1.0 + inverse_ratio(1.0, r1), 1.0 + inverse_ratio(1.0, r2));
            let env1 = |t: f64| k1 * pulse.value(t);
            let env2 = |t: f64| k2 * pulse.value(t);
            let terms = [Term::new(&arm1, &env1), Term::new(&arm2, &env2)];
            let u = propagator_time_ordered(&terms, pulse.duration, steps)?;
            process_fidelity(&target, &extract_register_gate(&u)?)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepTable {
        config: SweepConfig::Amplitude { couplings: *couplings, pulse: pulse.clone() },
        axes: vec![Axis::new("ratio1", ratios1.to_vec()), Axis::new("ratio2", ratios2.to_vec())],
        fidelity,
    })
}

/// Square cyclic pulse of length `op_time` for the given couplings.
pub fn dephasing_pulse(couplings: &ExchangeCouplings, op_time: f64) -> Result<PulsePlan> {
    let area = cyclic_area(couplings.omega(), 0)?;
    PulsePlan::square(area / op_time, op_time)
}

/// Reduced register channel after the gate pulse with the bath at coupling
/// set by `bath.lambda`.
pub fn dephasing_channel(bath: &HyperfineBath, couplings: &ExchangeCouplings, steps: usize) -> Result<QuantumChannel> {
    bath.validate()?;
    let pulse = dephasing_pulse(couplings, bath.op_time)?;
    let h_sys = kron(&build_hamiltonians(couplings).h_eff, &CMatrix::identity(bath.bath_dim()));
    let h_hi = build_hyperfine_hamiltonian(bath)?;
    let one = |_: f64| 1.0;
    let terms = [Term::new(&h_sys, &pulse), Term::new(&h_hi, &one)];
    let u = propagator_time_ordered(&terms, pulse.duration, steps)?;
    QuantumChannel::from_dilation(&u, FULL_DIM)
}

/// Process fidelity against the ideal entangler for each `lambda`, with the
/// coupling `A = N / (lambda tau_op)` and `tau_op` held fixed.
pub fn dephasing_sweep(
    bath_template: &HyperfineBath,
    lambdas: &[f64],
    couplings: &ExchangeCouplings,
    steps: usize,
) -> Result<SweepTable> {
    check_ratios("lambdas", lambdas)?;
    bath_template.validate()?;
    let target = analytic_entangler_for(&couplings_to_polar(couplings)?);

    let fidelity = lambdas
        .par_iter()
        .map(|&lambda| {
            let channel = dephasing_channel(&bath_template.with_lambda(lambda), couplings, steps)?;
            process_fidelity(&target, &channel)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepTable {
        config: SweepConfig::Dephasing { bath: *bath_template, couplings: *couplings, steps },
        axes: vec![Axis::new("lambda", lambdas.to_vec())],
        fidelity,
    })
}

/// Process fidelity of a single dephasing point.
pub fn dephasing_fidelity_direct(bath: &HyperfineBath, couplings: &ExchangeCouplings, steps: usize) -> Result<f64> {
    let channel = dephasing_channel(bath, couplings, steps)?;
    let target = analytic_entangler_for(&couplings_to_polar(couplings)?);
    process_fidelity(&target, &channel)
}
