// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! Local invariants of two-qubit gates.
//!
//! Weyl coordinates use the convention in which the canonical gate is
//! `exp(i/2 (c1 XX + c2 YY + c3 ZZ))`, so CNOT sits at `(pi/2, 0, 0)` and
//! SWAP at `(pi/2, pi/2, pi/2)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c, CMatrix, Complex64, ZERO};

/// Unitarity tolerance for gates handed to the invariant routines.
pub const GATE_UNITARY_TOL: f64 = 1e-10;
/// Geometric tolerance for the chamber and classifier tests.
pub const CLASSIFY_TOL: f64 = 1e-9;
/// Half-phases within this distance of 0 or pi are snapped to 0.
const SNAP_TOL: f64 = 1e-10;

pub const MAX_ENTANGLING_POWER: f64 = 2.0 / 9.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntanglerClass {
    Local,
    Entangling,
    Perfect,
    SpecialPerfect,
}

impl EntanglerClass {
    pub fn is_perfect(self) -> bool {
        matches!(self, Self::Perfect | Self::SpecialPerfect)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Local => "local",
            Self::Entangling => "entangling",
            Self::Perfect => "perfect",
            Self::SpecialPerfect => "special_perfect",
        }
    }
}

impl fmt::Display for EntanglerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateMetrics {
    pub g1: Complex64,
    pub g2: f64,
    pub weyl: [f64; 3],
    pub ep: f64,
    pub entangler_class: EntanglerClass,
}

pub fn magic_basis() -> CMatrix {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (o, i) = (c(r, 0.0), c(0.0, r));
    #[rustfmt::skip]
    let q = CMatrix::from_row_slice(4, 4, &[
        o,    ZERO, ZERO, i,
        ZERO, i,    o,    ZERO,
        ZERO, i,    -o,   ZERO,
        o,    ZERO, ZERO, -i,
    ]);
    q
}

fn check_gate(u: &CMatrix) -> Result<()> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(Error::DimensionMismatch { expected: "4x4".into(), actual: format!("{}x{}", u.rows(), u.cols()) });
    }
    let deviation = u.unitarity_deviation();
    if deviation > GATE_UNITARY_TOL {
        return Err(Error::NonUnitaryInput { deviation });
    }
    Ok(())
}

/// `m = (Q^dag U Q)^T (Q^dag U Q)`.
fn magic_gram(u: &CMatrix) -> CMatrix {
    let q = magic_basis();
    let ub = &(&q.adjoint() * u) * &q;
    &ub.transpose() * &ub
}

pub fn makhlin_invariants(u: &CMatrix) -> Result<(Complex64, f64)> {
    check_gate(u)?;
    let m = magic_gram(u);
    let det = u.determinant();
    let tr = m.trace();
    let tr2 = (&m * &m).trace();
    let g1 = tr * tr / (det * 16.0);
    let g2 = (tr * tr - tr2) / (det * 4.0);
    Ok((g1, g2.re))
}

pub fn weyl_coordinates(u: &CMatrix) -> Result<[f64; 3]> {
    check_gate(u)?;
    // Project to SU(4); the remaining fourth-root ambiguity only shifts
    // every half-phase by a multiple of pi/2, which the chamber folds away.
    let root = Complex64::from_polar(1.0, -u.determinant().arg() / 4.0);
    let m = magic_gram(&u.scale(root));
    let mut phases: Vec<f64> = m.eigenvalues().iter().map(|z| z.arg()).collect();
    phases.sort_by(f64::total_cmp);
    let raw = [0.5 * (phases[0] + phases[2]), 0.5 * (phases[1] + phases[2]), 0.5 * (phases[0] + phases[1])];
    Ok(canonicalize(raw))
}

fn fold(x: f64) -> f64 {
    let mut y = x.rem_euclid(PI);
    if PI - y < SNAP_TOL {
        y -= PI;
    }
    if y.abs() < SNAP_TOL {
        0.0
    } else {
        y
    }
}

fn sort_desc(c: &mut [f64; 3]) {
    c.sort_by(|a, b| b.total_cmp(a));
}

/// Maps any coordinate triple to its representative in the chamber
/// `pi >= c1 >= c2 >= c3 >= 0`, `c1 + c2 <= pi`, `c3 = 0 => c1 <= pi/2`.
pub fn canonicalize(raw: [f64; 3]) -> [f64; 3] {
    let mut c = raw.map(fold);
    sort_desc(&mut c);
    if c[0] + c[1] > PI + SNAP_TOL {
        c = [PI - c[1], PI - c[0], c[2]];
        sort_desc(&mut c);
    }
    if c[2] <= SNAP_TOL && c[0] > FRAC_PI_2 + SNAP_TOL {
        c[0] = PI - c[0];
        sort_desc(&mut c);
    }
    c.map(|x| x.max(0.0))
}

pub fn is_canonical(c: [f64; 3], tol: f64) -> bool {
    let [c1, c2, c3] = c;
    c.iter().all(|x| x.is_finite())
        && c1 <= PI + tol
        && c1 >= c2 - tol
        && c2 >= c3 - tol
        && c3 >= -tol
        && c1 + c2 <= PI + tol
        && (c3 > tol || c1 <= FRAC_PI_2 + tol)
}

/// `(G1, G2)` of the canonical gate at `c`.
pub fn invariants_from_weyl(c: [f64; 3]) -> (Complex64, f64) {
    let [c1, c2, c3] = c;
    let e = Complex64::from_polar(1.0, c3);
    let s = e * (c1 - c2).cos() + e.conj() * (c1 + c2).cos();
    let g1 = s * s * 0.25;
    let g2 = (2.0 * c1).cos() + (2.0 * c2).cos() + (2.0 * c3).cos();
    (g1, g2)
}

/// `exp(i/2 (c1 XX + c2 YY + c3 ZZ))` in the computational basis.
pub fn canonical_gate(c: [f64; 3]) -> CMatrix {
    let [c1, c2, c3] = c;
    let ep = Complex64::from_polar(1.0, c3 / 2.0);
    let em = ep.conj();
    let (a, b) = ((c1 - c2) / 2.0, (c1 + c2) / 2.0);
    let i = crate::numerics::I;
    let mut u = CMatrix::zeros(4, 4);
    u[(0, 0)] = ep * a.cos();
    u[(3, 3)] = ep * a.cos();
    u[(0, 3)] = ep * i * a.sin();
    u[(3, 0)] = ep * i * a.sin();
    u[(1, 1)] = em * b.cos();
    u[(2, 2)] = em * b.cos();
    u[(1, 2)] = em * i * b.sin();
    u[(2, 1)] = em * i * b.sin();
    u
}

pub fn entangling_power(g1: Complex64) -> f64 {
    (MAX_ENTANGLING_POWER * (1.0 - g1.norm())).clamp(0.0, MAX_ENTANGLING_POWER)
}

const L: [f64; 3] = [FRAC_PI_2, 0.0, 0.0];
const A2: [f64; 3] = [FRAC_PI_2, FRAC_PI_2, 0.0];

pub fn perfect_entangler_vertices() -> [[f64; 3]; 6] {
    let q = PI / 4.0;
    [L, [3.0 * q, q, 0.0], [3.0 * q, q, q], [q, q, q], [q, q, 0.0], A2]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Inward unit normals `n` and offsets `d` with `n . x >= d` inside the hull.
fn hull_facets() -> &'static [([f64; 3], f64)] {
    static FACETS: OnceLock<Vec<([f64; 3], f64)>> = OnceLock::new();
    FACETS.get_or_init(|| {
        let v = perfect_entangler_vertices();
        let mut facets: Vec<([f64; 3], f64)> = Vec::new();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                for k in j + 1..v.len() {
                    let n = cross(sub(v[j], v[i]), sub(v[k], v[i]));
                    let len = dot(n, n).sqrt();
                    if len < 1e-12 {
                        continue;
                    }
                    let mut n = n.map(|x| x / len);
                    let side: Vec<f64> = v.iter().map(|p| dot(n, sub(*p, v[i]))).collect();
                    let pos = side.iter().all(|s| *s >= -1e-12);
                    let neg = side.iter().all(|s| *s <= 1e-12);
                    if !(pos || neg) {
                        continue;
                    }
                    if neg {
                        n = n.map(|x| -x);
                    }
                    let d = dot(n, v[i]);
                    if !facets.iter().any(|(m, e)| (dot(*m, n) - 1.0).abs() < 1e-12 && (e - d).abs() < 1e-12) {
                        facets.push((n, d));
                    }
                }
            }
        }
        facets
    })
}

fn in_perfect_hull(c: [f64; 3]) -> bool {
    hull_facets().iter().all(|(n, d)| dot(*n, c) >= d - CLASSIFY_TOL)
}

fn distance_to_segment(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    let ab = sub(b, a);
    let t = (dot(sub(p, a), ab) / dot(ab, ab)).clamp(0.0, 1.0);
    let q = [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]];
    let r = sub(p, q);
    dot(r, r).sqrt()
}

pub fn classify_entangler(weyl: [f64; 3]) -> Result<EntanglerClass> {
    if !is_canonical(weyl, CLASSIFY_TOL) {
        return Err(Error::NonCanonicalInput(weyl));
    }
    let class = if weyl.iter().all(|x| x.abs() <= CLASSIFY_TOL) {
        EntanglerClass::Local
    } else if distance_to_segment(weyl, L, A2) <= CLASSIFY_TOL {
        EntanglerClass::SpecialPerfect
    } else if in_perfect_hull(weyl) {
        EntanglerClass::Perfect
    } else {
        EntanglerClass::Entangling
    };
    Ok(class)
}

pub fn gate_metrics(u: &CMatrix) -> Result<GateMetrics> {
    let (g1, g2) = makhlin_invariants(u)?;
    let weyl = weyl_coordinates(u)?;
    Ok(GateMetrics { g1, g2, weyl, ep: entangling_power(g1), entangler_class: classify_entangler(weyl)? })
}

pub mod gates {
    use crate::numerics::CMatrix;

    pub fn cnot() -> CMatrix {
        #[rustfmt::skip]
        let m = CMatrix::from_real_rows(4, 4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
        ]);
        m
    }

    pub fn swap() -> CMatrix {
        #[rustfmt::skip]
        let m = CMatrix::from_real_rows(4, 4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
        ]);
        m
    }

    /// CNOT(1->2) followed by CNOT(2->1).
    pub fn dcnot() -> CMatrix {
        #[rustfmt::skip]
        let m = CMatrix::from_real_rows(4, 4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 1.0, 0.0,
        ]);
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::analytic_entangler;
    use crate::numerics::{expm_hermitian, kron};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
        let a = CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        (&a + &a.adjoint()).scale_real(0.5)
    }

    fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
        let h = random_hermitian(rng, n);
        expm_hermitian(&h, rng.gen_range(1.0..6.0)).unwrap()
    }

    fn entangler(theta: f64) -> CMatrix {
        analytic_entangler(theta, 0.0, 0.0).matrix
    }

    #[test]
    fn magic_basis_is_unitary() {
        assert!(magic_basis().is_unitary(1e-15));
    }

    #[test]
    fn identity_and_known_gates() {
        let (g1, g2) = makhlin_invariants(&CMatrix::identity(4)).unwrap();
        assert!((g1 - c(1.0, 0.0)).norm() < 1e-14 && (g2 - 3.0).abs() < 1e-14);
        assert_eq!(weyl_coordinates(&CMatrix::identity(4)).unwrap(), [0.0; 3]);

        let (g1, g2) = makhlin_invariants(&gates::cnot()).unwrap();
        assert!(g1.norm() < 1e-14 && (g2 - 1.0).abs() < 1e-14);

        let cases = [
            (gates::cnot(), [FRAC_PI_2, 0.0, 0.0]),
            (gates::dcnot(), [FRAC_PI_2, FRAC_PI_2, 0.0]),
            (gates::swap(), [FRAC_PI_2, FRAC_PI_2, FRAC_PI_2]),
        ];
        for (u, want) in cases {
            let w = weyl_coordinates(&u).unwrap();
            for k in 0..3 {
                assert!((w[k] - want[k]).abs() < 1e-9, "{w:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn cnot_shares_invariants_with_its_canonical_gate() {
        // Independent route: the canonical gate at L is built directly from its definition.
        let a = canonical_gate([FRAC_PI_2, 0.0, 0.0]);
        let (ga1, ga2) = makhlin_invariants(&a).unwrap();
        let (gc1, gc2) = makhlin_invariants(&gates::cnot()).unwrap();
        assert!((ga1 - gc1).norm() < 1e-12 && (ga2 - gc2).abs() < 1e-12);
    }

    #[test]
    fn canonical_gate_matches_pauli_exponential() {
        use crate::numerics::pauli;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let cs = [rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)];
            let h = &(&kron(&pauli::x(), &pauli::x()).scale_real(cs[0])
                + &kron(&pauli::y(), &pauli::y()).scale_real(cs[1]))
                + &kron(&pauli::z(), &pauli::z()).scale_real(cs[2]);
            let want = expm_hermitian(&h, -0.5).unwrap();
            assert!(canonical_gate(cs).max_abs_diff(&want) < 1e-12);
        }
    }

    #[test]
    fn entangler_family_invariants() {
        for k in 0..=50 {
            let theta = FRAC_PI_4 * k as f64 / 50.0;
            let (g1, g2) = makhlin_invariants(&entangler(theta)).unwrap();
            let c4 = (4.0 * theta).cos();
            assert!((g1 - c(0.25 * (1.0 + c4).powi(2), 0.0)).norm() < 1e-9);
            assert!((g2 - (1.0 + 2.0 * c4)).abs() < 1e-9);
            if k > 0 {
                let w = weyl_coordinates(&entangler(theta)).unwrap();
                let want = [2.0 * theta, 2.0 * theta, 0.0];
                for j in 0..3 {
                    assert!((w[j] - want[j]).abs() < 1e-9, "theta {theta}: {w:?}");
                }
            }
        }
    }

    #[test]
    fn entangling_power_values() {
        let ep = |t: f64| gate_metrics(&entangler(t)).unwrap().ep;
        assert!((ep(FRAC_PI_4) - 2.0 / 9.0).abs() < 1e-12);
        assert!(ep(0.0).abs() < 1e-12);
        assert!((ep(FRAC_PI_8) - 1.0 / 6.0).abs() < 1e-10);
        assert_eq!(entangling_power(c(1.5, 0.0)), 0.0);
    }

    #[test]
    fn invariants_from_weyl_agree_on_random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let u = random_unitary(&mut rng, 4);
            let (g1, g2) = makhlin_invariants(&u).unwrap();
            let w = weyl_coordinates(&u).unwrap();
            assert!(is_canonical(w, 1e-12), "{w:?}");
            let (h1, h2) = invariants_from_weyl(w);
            assert!((g1 - h1).norm() < 1e-9 && (g2 - h2).abs() < 1e-9);
            let ep = entangling_power(g1);
            assert!((0.0..=MAX_ENTANGLING_POWER).contains(&ep));
        }
    }

    #[test]
    fn local_factors_change_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut bases = vec![gates::cnot(), gates::swap(), entangler(0.3), CMatrix::identity(4)];
        for _ in 0..4 {
            bases.push(random_unitary(&mut rng, 4));
        }
        for i in 0..500 {
            let u = &bases[i % bases.len()];
            let k12 = kron(&random_unitary(&mut rng, 2), &random_unitary(&mut rng, 2));
            let k34 = kron(&random_unitary(&mut rng, 2), &random_unitary(&mut rng, 2));
            let v = &(&k12 * u) * &k34;
            let a = gate_metrics(u).unwrap();
            let b = gate_metrics(&v).unwrap();
            assert!((a.g1 - b.g1).norm() < 1e-9 && (a.g2 - b.g2).abs() < 1e-9);
            assert!((a.ep - b.ep).abs() < 1e-9);
            for k in 0..3 {
                assert!((a.weyl[k] - b.weyl[k]).abs() < 1e-9, "{:?} vs {:?}", a.weyl, b.weyl);
            }
        }
    }

    #[test]
    fn canonical_gate_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..300 {
            let c = canonicalize([rng.gen_range(0.0..PI), rng.gen_range(0.0..PI), rng.gen_range(0.0..PI)]);
            let w = weyl_coordinates(&canonical_gate(c)).unwrap();
            for k in 0..3 {
                assert!((w[k] - c[k]).abs() < 1e-8, "{c:?} -> {w:?}");
            }
        }
    }

    #[test]
    fn hull_has_expected_facets() {
        // LMNPQA2 is bounded by 7 planes: the base c3 = 0 plus six sloped faces.
        assert_eq!(hull_facets().len(), 7);
        for v in perfect_entangler_vertices() {
            assert!(in_perfect_hull(v));
        }
        assert!(!in_perfect_hull([0.0; 3]));
        assert!(!in_perfect_hull([PI, 0.0, 0.0]));
    }

    #[test]
    fn classifier_examples() {
        let on = |t: f64| classify_entangler([2.0 * t, 2.0 * t, 0.0]).unwrap();
        assert_eq!(on(3.0 * PI / 16.0), EntanglerClass::Perfect);
        assert_eq!(on(PI / 16.0), EntanglerClass::Entangling);
        assert_eq!(on(FRAC_PI_4), EntanglerClass::SpecialPerfect);
        assert_eq!(on(0.0), EntanglerClass::Local);
        assert_eq!(classify_entangler([FRAC_PI_2, 0.0, 0.0]).unwrap(), EntanglerClass::SpecialPerfect);
        assert!(matches!(classify_entangler([0.1, 0.5, 0.0]), Err(Error::NonCanonicalInput(_))));
        assert!(matches!(classify_entangler([2.0, 0.0, 0.0]), Err(Error::NonCanonicalInput(_))));
    }

    #[test]
    fn classifier_boundary_on_fine_grid() {
        let n = 1000;
        let step = FRAC_PI_4 / (n - 1) as f64;
        for k in 0..n {
            let theta = step * k as f64;
            let class = gate_metrics(&entangler(theta)).unwrap().entangler_class;
            if theta >= FRAC_PI_8 - 1e-12 {
                assert!(class.is_perfect(), "theta {theta}");
            } else if theta < FRAC_PI_8 - step {
                assert!(!class.is_perfect(), "theta {theta}");
            }
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let m = CMatrix::from_real_diagonal(&[1.0, 1.0, 1.0, 0.5]);
        assert!(matches!(makhlin_invariants(&m), Err(Error::NonUnitaryInput { .. })));
        assert!(matches!(weyl_coordinates(&m), Err(Error::NonUnitaryInput { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn canonicalize_lands_in_chamber(a in -10.0f64..10.0, b in -10.0f64..10.0, d in -10.0f64..10.0) {
            let c = canonicalize([a, b, d]);
            prop_assert!(is_canonical(c, 1e-12), "{:?}", c);
            let (g1, g2) = invariants_from_weyl([a, b, d]);
            let (h1, h2) = invariants_from_weyl(c);
            prop_assert!((g1 - h1).norm() < 1e-9 && (g2 - h2).abs() < 1e-9);
        }

        #[test]
        fn global_phase_is_invisible(phase in -PI..PI, t in 0.0f64..FRAC_PI_4) {
            let u = entangler(t);
            let v = u.scale(Complex64::from_polar(1.0, phase));
            let a = gate_metrics(&u).unwrap();
            let b = gate_metrics(&v).unwrap();
            prop_assert!((a.g1 - b.g1).norm() < 1e-9);
            for k in 0..3 {
                prop_assert!((a.weyl[k] - b.weyl[k]).abs() < 1e-9);
            }
        }
    }
}
