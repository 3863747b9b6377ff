// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! The register gate realized on the ancilla-`|0>` subspace.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c, svd, CMatrix, Complex64, ZERO};
use crate::propagation::{propagator_closed_form, solve_cyclic};
use crate::spin::{build_hamiltonians, couplings_to_polar, ExchangeCouplings, PolarCouplings, FULL_DIM, REGISTER_DIM};

/// Unitarity tolerance for full propagators handed to the extractor.
pub const PROPAGATOR_UNITARY_TOL: f64 = 1e-10;

/// 4x4 block `<0,i| U |0,j>` over register states `|s1 s2>` = 00, 01, 10, 11.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterGate {
    pub matrix: CMatrix,
    /// `1 - sigma_min^2`: worst-case population lost from the computational subspace.
    pub leakage: f64,
}

impl RegisterGate {
    /// Wraps a 4x4 block and measures its leakage.
    pub fn from_block(matrix: CMatrix) -> Self {
        let s_min = svd(&matrix).s.last().copied().unwrap_or(0.0);
        let leakage = (1.0 - s_min * s_min).clamp(0.0, 1.0);
        Self { matrix, leakage }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.matrix.is_unitary(tol)
    }
}

pub fn extract_register_gate(u_full: &CMatrix) -> Result<RegisterGate> {
    if u_full.rows() != FULL_DIM || u_full.cols() != FULL_DIM {
        return Err(Error::DimensionMismatch {
            expected: "8x8".into(),
            actual: format!("{}x{}", u_full.rows(), u_full.cols()),
        });
    }
    let deviation = u_full.unitarity_deviation();
    if deviation > PROPAGATOR_UNITARY_TOL {
        return Err(Error::NonUnitaryInput { deviation });
    }
    Ok(RegisterGate::from_block(u_full.block(0, 0, REGISTER_DIM, REGISTER_DIM)))
}

/// The holonomic entangler in closed form:
///
/// ```text
/// [ 1        0                      0                    0 ]
/// [ 0        cos 2t                 -e^{i(p1+p2)} sin 2t 0 ]
/// [ 0        -e^{-i(p1+p2)} sin 2t  -cos 2t              0 ]
/// [ 0        0                      0                   -1 ]
/// ```
pub fn analytic_entangler(theta: f64, phi1: f64, phi2: f64) -> RegisterGate {
    let (c2, s2) = ((2.0 * theta).cos(), (2.0 * theta).sin());
    let e = Complex64::from_polar(1.0, phi1 + phi2);
    let one = c(1.0, 0.0);
    #[rustfmt::skip]
    let m = CMatrix::from_row_slice(4, 4, &[
        one,  ZERO,              ZERO,          ZERO,
        ZERO, c(c2, 0.0),        -e * s2,       ZERO,
        ZERO, -e.conj() * s2,    c(-c2, 0.0),   ZERO,
        ZERO, ZERO,              ZERO,          -one,
    ]);
    RegisterGate { matrix: m, leakage: 0.0 }
}

pub fn analytic_entangler_for(p: &PolarCouplings) -> RegisterGate {
    analytic_entangler(p.theta, p.phi1, p.phi2)
}

/// Result of running the chain with a calibrated square pulse.
#[derive(Debug, Clone)]
pub struct HolonomicGate {
    pub polar: PolarCouplings,
    pub simulated: RegisterGate,
    pub analytic: RegisterGate,
    /// max entrywise |simulated - analytic|.
    pub deviation: f64,
}

/// Simulates the cyclic evolution for `couplings` and compares with the closed form.
pub fn holonomic_gate(couplings: &ExchangeCouplings, amplitude: f64, winding: u32) -> Result<HolonomicGate> {
    let polar = couplings_to_polar(couplings)?;
    let hs = build_hamiltonians(couplings);
    let plan = solve_cyclic(polar.omega, amplitude, winding)?;
    let u = propagator_closed_form(&hs, plan.total_area());
    let simulated = extract_register_gate(&u)?;
    let analytic = analytic_entangler_for(&polar);
    let deviation = simulated.matrix.max_abs_diff(&analytic.matrix);
    Ok(HolonomicGate { polar, simulated, analytic, deviation })
}

/// Serializable view of a 4x4 gate as `[re, im]` pairs in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateEntries(pub Vec<Vec<[f64; 2]>>);

impl From<&CMatrix> for GateEntries {
    fn from(m: &CMatrix) -> Self {
        Self((0..m.rows()).map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::{propagate_plan, PulsePlan};
    use crate::spin::polar_to_couplings;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI};

    #[test]
    fn identity_propagator_gives_identity_gate() {
        let g = extract_register_gate(&CMatrix::identity(8)).unwrap();
        assert_eq!(g.matrix, CMatrix::identity(4));
        assert!(g.leakage <= 1e-15);
    }

    #[test]
    fn extractor_rejects_bad_input() {
        let mut m = CMatrix::identity(8);
        m[(0, 0)] = c(2.0, 0.0);
        assert!(matches!(extract_register_gate(&m), Err(Error::NonUnitaryInput { .. })));
        assert!(matches!(extract_register_gate(&CMatrix::identity(4)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn special_perfect_entangler_from_equal_couplings() {
        let g = holonomic_gate(&ExchangeCouplings::xy(1.0, 1.0), 1.0, 0).unwrap();
        #[rustfmt::skip]
        let want = CMatrix::from_real_rows(4, 4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, -1.0, 0.0,
            0.0, -1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, -1.0,
        ]);
        assert!(g.simulated.matrix.max_abs_diff(&want) <= 1e-12);
        assert!(g.simulated.leakage <= 1e-10);
    }

    #[test]
    fn half_area_leaks() {
        let cp = ExchangeCouplings::new(0.7, 0.4, 0.1, -0.3);
        let hs = build_hamiltonians(&cp);
        let u = propagator_closed_form(&hs, 0.5 * PI / hs.omega());
        let g = extract_register_gate(&u).unwrap();
        assert!(g.leakage > 0.5, "leakage {}", g.leakage);
    }

    #[test]
    fn analytic_edges() {
        let g = analytic_entangler(0.0, 0.3, -1.2);
        assert!(g.matrix.max_abs_diff(&CMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0])) < 1e-15);
        let g = analytic_entangler(FRAC_PI_4, 0.0, 0.0);
        assert!((g.matrix[(1, 2)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((g.matrix[(2, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(g.matrix[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn analytic_eighth_turn_with_quarter_phase() {
        // theta = pi/8, phi1 + phi2 = pi/2: middle block [[r, -i r], [i r, -r]], r = 1/sqrt 2.
        let r = FRAC_1_SQRT_2;
        let want = [[c(r, 0.0), c(0.0, -r)], [c(0.0, r), c(-r, 0.0)]];
        let g = analytic_entangler(FRAC_PI_8, FRAC_PI_4, FRAC_PI_4);
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.matrix[(i + 1, j + 1)] - want[i][j]).norm() < 1e-15);
            }
        }
        let polar = PolarCouplings { omega: 1.3, theta: FRAC_PI_8, phi1: FRAC_PI_4, phi2: FRAC_PI_4 };
        let sim = holonomic_gate(&polar_to_couplings(&polar), 0.9, 0).unwrap();
        assert!(sim.simulated.matrix.max_abs_diff(&g.matrix) <= 1e-12);
    }

    #[test]
    fn simulated_gate_matches_closed_form_and_is_involutory() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let cp = ExchangeCouplings::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let n = rng.gen_range(0..3);
            let g = holonomic_gate(&cp, rng.gen_range(0.2..3.0), n).unwrap();
            assert!(g.deviation <= 1e-9);
            assert!(g.simulated.leakage <= 1e-10);
            let m = &g.analytic.matrix;
            assert!(m.hermiticity_deviation() <= 1e-12);
            assert!((m * m).max_abs_diff(&CMatrix::identity(4)) <= 1e-12);
        }
    }

    #[test]
    fn winding_does_not_change_the_gate() {
        let cp = ExchangeCouplings::new(0.9, -0.4, 0.3, 0.8);
        let g0 = holonomic_gate(&cp, 1.0, 0).unwrap();
        let g3 = holonomic_gate(&cp, 1.0, 3).unwrap();
        assert!(g0.simulated.matrix.max_abs_diff(&g3.simulated.matrix) <= 1e-9);
    }

    #[test]
    fn time_ordered_gate_matches() {
        let cp = ExchangeCouplings::new(0.9, -0.4, 0.3, 0.8);
        let hs = build_hamiltonians(&cp);
        let plan: PulsePlan = solve_cyclic(hs.omega(), 1.0, 1).unwrap();
        let g = extract_register_gate(&propagate_plan(&hs, &plan, 200).unwrap()).unwrap();
        let want = analytic_entangler_for(&couplings_to_polar(&cp).unwrap());
        assert!(g.matrix.max_abs_diff(&want.matrix) <= 1e-9);
    }
}
