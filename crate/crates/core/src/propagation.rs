// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse envelopes and the 8x8 chain propagator.
//!
//! Because every coupling shares one envelope, `H(t) = Omega(t) H0` commutes
//! with itself at all times and the propagator depends on the pulse only
//! through its area `a_t`. [`propagator_closed_form`] evaluates that directly
//! from the SVD factors of the exchange matrix; [`propagator_time_ordered`] is
//! the brute-force midpoint product used whenever several envelopes (or a
//! static bath term) break self-commutation.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c, CMatrix, HermitianEigen};
use crate::spin::{HamiltonianSet, FULL_DIM, REGISTER_DIM};

pub const DEFAULT_STEPS: usize = 200;
/// Absolute accuracy requested from the adaptive quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// How far `a * omega / pi` may sit from an odd integer and still count as cyclic.
pub const CYCLIC_TOL: f64 = 1e-9;
/// Gaussian width as a fraction of the pulse duration.
pub const DEFAULT_GAUSSIAN_WIDTH: f64 = 0.1;

/// Anything that can be sampled as a real envelope on the pulse window.
pub trait Envelope: Sync {
    fn value(&self, t: f64) -> f64;
}

impl<F: Fn(f64) -> f64 + Sync> Envelope for F {
    fn value(&self, t: f64) -> f64 {
        self(t)
    }
}

/// Time-independent envelope.
#[derive(Debug, Clone, Copy)]
pub struct Constant(pub f64);

impl Envelope for Constant {
    fn value(&self, _t: f64) -> f64 {
        self.0
    }
}

/// Profile of a pulse before scaling by its amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PulseShape {
    Square,
    /// Centered gaussian of standard deviation `width * duration`.
    Gaussian {
        width: f64,
    },
    /// Piecewise-linear profile through `(time, value)` samples.
    Tabulated {
        samples: Vec<(f64, f64)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulsePlan {
    pub shape: PulseShape,
    /// Height of a square pulse, peak of a gaussian, scale of a tabulated profile.
    pub amplitude: f64,
    pub duration: f64,
    pub winding: u32,
}

impl PulsePlan {
    pub fn new(shape: PulseShape, amplitude: f64, duration: f64, winding: u32) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::InvalidPulse(format!("amplitude must be positive, got {amplitude}")));
        }
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidPulse(format!("duration must be positive, got {duration}")));
        }
        match &shape {
            PulseShape::Square => {}
            PulseShape::Gaussian { width } => {
                if !(*width > 0.0) {
                    return Err(Error::InvalidPulse(format!("gaussian width must be positive, got {width}")));
                }
            }
            PulseShape::Tabulated { samples } => {
                if samples.len() < 2 {
                    return Err(Error::InvalidPulse("tabulated pulse needs at least two samples".into()));
                }
                let (t0, tn) = (samples[0].0, samples[samples.len() - 1].0);
                if t0 != 0.0 || (tn - duration).abs() > 1e-12 * duration {
                    return Err(Error::InvalidPulse(format!(
                        "tabulated samples must span [0, {duration}], got [{t0}, {tn}]"
                    )));
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::InvalidPulse("tabulated sample times must increase".into()));
                }
                if samples.iter().any(|s| s.1 < 0.0 || !s.1.is_finite()) {
                    return Err(Error::InvalidPulse("tabulated values must be finite and non-negative".into()));
                }
            }
        }
        let plan = Self { shape, amplitude, duration, winding };
        if !(plan.total_area() > 0.0) {
            return Err(Error::InvalidPulse("pulse area must be positive".into()));
        }
        Ok(plan)
    }

    pub fn square(amplitude: f64, duration: f64) -> Result<Self> {
        Self::new(PulseShape::Square, amplitude, duration, 0)
    }

    /// Unscaled profile at `t`; zero outside the window.
    fn profile(&self, t: f64) -> f64 {
        if !(0.0..=self.duration).contains(&t) {
            return 0.0;
        }
        match &self.shape {
            PulseShape::Square => 1.0,
            PulseShape::Gaussian { width } => {
                let sigma = width * self.duration;
                let x = (t - 0.5 * self.duration) / sigma;
                (-0.5 * x * x).exp()
            }
            PulseShape::Tabulated { samples } => {
                let k = samples.partition_point(|s| s.0 <= t).clamp(1, samples.len() - 1);
                let ((t0, v0), (t1, v1)) = (samples[k - 1], samples[k]);
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    pub fn total_area(&self) -> f64 {
        self.area_unchecked(self.duration)
    }

    fn area_unchecked(&self, t: f64) -> f64 {
        let a = match &self.shape {
            PulseShape::Square => t,
            PulseShape::Gaussian { .. } => {
                adaptive_simpson(&|s| self.profile(s), 0.0, t, QUADRATURE_TOL / self.amplitude)
            }
            PulseShape::Tabulated { samples } => {
                // exact for a piecewise-linear profile
                let mut acc = 0.0;
                for w in samples.windows(2) {
                    let (t0, t1) = (w[0].0, w[1].0.min(t));
                    if t1 <= t0 {
                        break;
                    }
                    acc += 0.5 * (self.profile(t0) + self.profile(t1)) * (t1 - t0);
                }
                acc
            }
        };
        self.amplitude * a
    }

    /// Same shape and duration, amplitude rescaled so the total area is `area`.
    pub fn with_total_area(&self, area: f64) -> Result<Self> {
        let unit = self.total_area() / self.amplitude;
        Self::new(self.shape.clone(), area / unit, self.duration, self.winding)
    }

    /// Window-length-preserving copy with a different amplitude.
    pub fn with_amplitude(&self, amplitude: f64) -> Result<Self> {
        Self::new(self.shape.clone(), amplitude, self.duration, self.winding)
    }
}

impl Envelope for PulsePlan {
    fn value(&self, t: f64) -> f64 {
        self.amplitude * self.profile(t)
    }
}

/// `a_t = int_0^t Omega(s) ds`.
pub fn pulse_area(plan: &PulsePlan, t: f64) -> Result<f64> {
    if !(0.0..=plan.duration).contains(&t) {
        return Err(Error::OutOfRange { t, duration: plan.duration });
    }
    Ok(plan.area_unchecked(t))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    // Split first so a narrow peak cannot hide between the initial nodes.
    const PANELS: usize = 16;
    let h = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|k| {
            let (x0, x1) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (f0, fm, f1) = (f(x0), f(0.5 * (x0 + x1)), f(x1));
            let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
            step(f, x0, x1, f0, fm, f1, whole, tol / PANELS as f64, 48)
        })
        .sum()
}

/// Square pulse whose area satisfies `area * omega = (2 winding + 1) pi`.
pub fn solve_cyclic(omega: f64, amplitude: f64, winding: u32) -> Result<PulsePlan> {
    if !(omega > 0.0) {
        return Err(Error::ZeroCoupling);
    }
    let duration = cyclic_area(omega, winding)? / amplitude;
    PulsePlan::new(PulseShape::Square, amplitude, duration, winding)
}

/// `(2 winding + 1) pi / omega`.
pub fn cyclic_area(omega: f64, winding: u32) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::ZeroCoupling);
    }
    Ok((2 * winding + 1) as f64 * PI / omega)
}

/// Fails unless `area * omega` is an odd multiple of pi.
pub fn check_cyclic(area: f64, omega: f64) -> Result<u32> {
    let ratio = area * omega / PI;
    let n = ((ratio - 1.0) / 2.0).round();
    if n < 0.0 || (ratio - (2.0 * n + 1.0)).abs() > CYCLIC_TOL * ratio.abs().max(1.0) {
        return Err(Error::NonCyclicPulse { ratio });
    }
    Ok(n as u32)
}

/// Propagator from the SVD factors:
/// `sum_{k,l} i^{|k-l|} |l><k| (x) V_l cos(a T + |k-l| pi/2) V_k^dagger`,
/// with the `-i` of the odd sine term carried by `i * cos(x + pi/2)`.
pub fn propagator_closed_form(h: &HamiltonianSet, area: f64) -> CMatrix {
    let v = [&h.v0, &h.v1];
    let mut u = CMatrix::zeros(FULL_DIM, FULL_DIM);
    for l in 0..2 {
        for k in 0..2 {
            let off = if k == l { 0.0 } else { FRAC_PI_2 };
            let phase = if k == l { c(1.0, 0.0) } else { c(0.0, 1.0) };
            let diag: Vec<f64> = h.t_diag.iter().map(|&t| (area * t + off).cos()).collect();
            let block = (v[l] * CMatrix::from_real_diagonal(&diag) * v[k].adjoint()).scale(phase);
            u.set_block(l * REGISTER_DIM, k * REGISTER_DIM, &block);
        }
    }
    u
}

/// `exp(-i a H0)` by eigendecomposition; the oracle for the closed form.
pub fn propagator_exponential(h: &HamiltonianSet, area: f64) -> Result<CMatrix> {
    crate::numerics::expm_hermitian(&h.h_eff, area)
}

/// One term `envelope(t) * op` of a time-dependent Hamiltonian.
#[derive(Clone, Copy)]
pub struct Term<'a> {
    pub op: &'a CMatrix,
    pub envelope: &'a dyn Envelope,
}

impl<'a> Term<'a> {
    pub fn new(op: &'a CMatrix, envelope: &'a dyn Envelope) -> Self {
        Self { op, envelope }
    }
}

/// Time-ordered product of midpoint steps,
/// `U = prod_k exp(-i dt sum_j f_j(t_k) H_j)` with later steps on the left.
///
/// Consecutive steps whose envelope values coincide exactly are merged into a
/// single exponential, which is the same product evaluated once.
pub fn propagator_time_ordered(terms: &[Term<'_>], duration: f64, steps: usize) -> Result<CMatrix> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    if !(duration >= 0.0) {
        return Err(Error::InvalidParameter(format!("duration must be non-negative, got {duration}")));
    }
    let Some(first) = terms.first() else {
        return Err(Error::InvalidParameter("no Hamiltonian terms given".into()));
    };
    let dim = first.op.rows();
    for t in terms {
        if t.op.rows() != dim || t.op.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{dim}x{dim}"),
                actual: format!("{}x{}", t.op.rows(), t.op.cols()),
            });
        }
    }

    let dt = duration / steps as f64;
    let coeffs = |k: usize| -> Vec<f64> {
        let t = (k as f64 + 0.5) * dt;
        terms.iter().map(|term| term.envelope.value(t)).collect()
    };

    let mut u = CMatrix::identity(dim);
    let mut k = 0;
    while k < steps {
        let current = coeffs(k);
        let mut run = 1;
        while k + run < steps && coeffs(k + run) == current {
            run += 1;
        }
        let mut h = CMatrix::zeros(dim, dim);
        for (term, &f) in terms.iter().zip(&current) {
            if f != 0.0 {
                h += &term.op.scale_real(f);
            }
        }
        if h.max_abs() > 0.0 {
            let step = HermitianEigen::new(&h)?.exp_i(dt * run as f64);
            u = step * u;
        }
        k += run;
    }
    Ok(u)
}

/// Time-ordered propagator of `Omega(t) H_eff` for an arbitrary pulse.
pub fn propagate_plan(h: &HamiltonianSet, plan: &PulsePlan, steps: usize) -> Result<CMatrix> {
    propagator_time_ordered(&[Term::new(&h.h_eff, plan)], plan.duration, steps)
}

/// Leakage-free check used by the tests: off-diagonal ancilla blocks vanish.
pub fn off_block_norm(u: &CMatrix) -> f64 {
    let upper = u.block(0, REGISTER_DIM, REGISTER_DIM, REGISTER_DIM).max_abs();
    let lower = u.block(REGISTER_DIM, 0, REGISTER_DIM, REGISTER_DIM).max_abs();
    upper.max(lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::expm_hermitian;
    use crate::spin::{build_hamiltonians, ExchangeCouplings};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_couplings(rng: &mut impl Rng) -> ExchangeCouplings {
        ExchangeCouplings::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        )
    }

    #[test]
    fn square_area() {
        let p = PulsePlan::square(2.0, 5.0).unwrap();
        assert_eq!(pulse_area(&p, 3.0).unwrap(), 6.0);
        assert_eq!(pulse_area(&p, 0.0).unwrap(), 0.0);
        assert!(matches!(pulse_area(&p, 5.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(pulse_area(&p, -0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn gaussian_area_matches_fine_trapezoid() {
        let p = PulsePlan::new(PulseShape::Gaussian { width: 0.15 }, 1.7, 2.3, 0).unwrap();
        for t in [0.0, 0.4, 1.15, 2.3] {
            let n = 1_000_000;
            let h = t / n as f64;
            let mut trap = 0.5 * (p.value(0.0) + p.value(t));
            for k in 1..n {
                trap += p.value(k as f64 * h);
            }
            trap *= h;
            let got = pulse_area(&p, t).unwrap();
            assert!((got - trap).abs() <= 1e-9, "t={t}: {got} vs {trap}");
        }
    }

    #[test]
    fn tabulated_area_is_piecewise_trapezoid() {
        let samples = vec![(0.0, 0.0), (1.0, 2.0), (3.0, 2.0), (4.0, 0.0)];
        let p = PulsePlan::new(PulseShape::Tabulated { samples }, 1.5, 4.0, 0).unwrap();
        assert!((p.total_area() - 1.5 * 6.0).abs() < 1e-14);
        assert!((pulse_area(&p, 0.5).unwrap() - 1.5 * 0.25).abs() < 1e-14);
        assert!((p.value(2.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_pulses_are_rejected() {
        assert!(PulsePlan::square(0.0, 1.0).is_err());
        assert!(PulsePlan::square(1.0, -1.0).is_err());
        let zero = PulseShape::Tabulated { samples: vec![(0.0, 0.0), (1.0, 0.0)] };
        assert!(PulsePlan::new(zero, 1.0, 1.0, 0).is_err());
        let gap = PulseShape::Tabulated { samples: vec![(0.0, 1.0), (0.5, 1.0)] };
        assert!(PulsePlan::new(gap, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn cyclic_durations() {
        let p = solve_cyclic(PI, 1.0, 0).unwrap();
        assert!((p.duration - 1.0).abs() < 1e-15);
        let p = solve_cyclic(1.0, 1.0, 1).unwrap();
        assert!((p.duration - 3.0 * PI).abs() < 1e-14);
        assert!((p.total_area() * 1.0 - 3.0 * PI).abs() < 1e-12);
        assert_eq!(solve_cyclic(0.0, 1.0, 0), Err(Error::ZeroCoupling));
        assert_eq!(check_cyclic(3.0 * PI, 1.0), Ok(1));
        assert!(matches!(check_cyclic(2.0 * PI, 1.0), Err(Error::NonCyclicPulse { .. })));
    }

    #[test]
    fn closed_form_at_zero_area_is_identity() {
        let hs = build_hamiltonians(&ExchangeCouplings::new(0.3, -1.1, 0.4, 0.9));
        let u = propagator_closed_form(&hs, 0.0);
        assert!(u.max_abs_diff(&CMatrix::identity(8)) <= 1e-15);
    }

    #[test]
    fn closed_form_is_block_diagonal_when_cyclic() {
        let hs = build_hamiltonians(&ExchangeCouplings::new(0.3, -1.1, 0.4, 0.9));
        for n in 0..3 {
            let plan = solve_cyclic(hs.omega(), 0.7, n).unwrap();
            let u = propagator_closed_form(&hs, plan.total_area());
            assert!(off_block_norm(&u) <= 1e-12);
            let flip = CMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]);
            let want = &hs.v0 * flip * hs.v0.adjoint();
            assert!(u.block(0, 0, 4, 4).max_abs_diff(&want) <= 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let hs = build_hamiltonians(&random_couplings(&mut rng));
            let area = rng.gen_range(0.0..10.0);
            let u = propagator_closed_form(&hs, area);
            let e = expm_hermitian(&hs.h_eff, area).unwrap();
            assert!(u.max_abs_diff(&e) <= 1e-10);
            assert!(u.unitarity_deviation() <= 1e-12);
        }
    }

    #[test]
    fn exponential_matches_trotter_product() {
        let hs = build_hamiltonians(&ExchangeCouplings::new(1.1, 0.6, -0.2, 0.5));
        let area = 2.4;
        let steps = 200;
        let small = expm_hermitian(&hs.h_eff, area / steps as f64).unwrap();
        let mut prod = CMatrix::identity(8);
        for _ in 0..steps {
            prod = &small * &prod;
        }
        let exact = propagator_exponential(&hs, area).unwrap();
        assert!(exact.max_abs_diff(&prod) <= 1e-8);
    }

    #[test]
    fn time_ordered_square_matches_closed_form() {
        let hs = build_hamiltonians(&ExchangeCouplings::new(0.8, 1.3, 0.2, -0.4));
        let plan = PulsePlan::square(1.3, 2.1).unwrap();
        let u = propagate_plan(&hs, &plan, DEFAULT_STEPS).unwrap();
        let want = propagator_closed_form(&hs, plan.total_area());
        assert!(u.max_abs_diff(&want) <= 1e-8);
    }

    #[test]
    fn time_ordered_zero_hamiltonian_is_identity() {
        let zero = CMatrix::zeros(8, 8);
        let env = |t: f64| 1.0 + t;
        for steps in [1, 7, 200] {
            let u = propagator_time_ordered(&[Term::new(&zero, &env)], 3.0, steps).unwrap();
            assert_eq!(u, CMatrix::identity(8));
        }
        assert!(propagator_time_ordered(&[Term::new(&zero, &env)], 3.0, 0).is_err());
    }

    #[test]
    fn time_ordered_two_arms_match_closed_form() {
        let cp = ExchangeCouplings::new(0.8, 1.3, 0.2, -0.4);
        let hs = build_hamiltonians(&cp);
        let (arm1, arm2) = crate::spin::arm_hamiltonians(&cp);
        let plan = PulsePlan::new(PulseShape::Gaussian { width: 0.1 }, 2.0, 3.0, 0).unwrap();
        let terms = [Term::new(&arm1, &plan), Term::new(&arm2, &plan)];
        let u = propagator_time_ordered(&terms, plan.duration, DEFAULT_STEPS).unwrap();
        let want = propagator_closed_form(&hs, plan.total_area());
        assert!(u.max_abs_diff(&want) <= 1e-8);
    }

    #[test]
    fn midpoint_stepping_is_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let hs = build_hamiltonians(&random_couplings(&mut rng));
            let (amp, tau) = (rng.gen_range(0.5..1.5), rng.gen_range(1.0..3.0));
            let env = move |t: f64| amp * (1.0 + t / tau).powi(2);
            let area = amp * tau * 7.0 / 3.0;
            let exact = propagator_closed_form(&hs, area);
            let err = |steps| {
                propagator_time_ordered(&[Term::new(&hs.h_eff, &env)], tau, steps).unwrap().max_abs_diff(&exact)
            };
            let (coarse, fine) = (err(20), err(40));
            assert!(coarse / fine >= 3.0, "ratio {}", coarse / fine);
        }
    }

    #[test]
    fn propagators_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let hs = build_hamiltonians(&random_couplings(&mut rng));
            let plan = PulsePlan::new(PulseShape::Gaussian { width: 0.1 }, 1.0, 2.0, 0).unwrap();
            assert!(propagate_plan(&hs, &plan, 50).unwrap().unitarity_deviation() <= 1e-10);
            assert!(propagator_closed_form(&hs, 1.3).unitarity_deviation() <= 1e-10);
        }
    }
}
