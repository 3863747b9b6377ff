// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! The three-spin chain: ancilla `a` in the middle, register spins 1 and 2
//! on either side. Tensor order is `(a, 1, 2)` with site `a` leftmost, and
//! `|0>` is spin-up, so basis states enumerate as `|s_a s_1 s_2>` = 000..111.
//!
//! Units: hbar = 1. Couplings are angular frequencies and the complex
//! hopping amplitudes are `alpha_k = (J_k + i D_k) / 2`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c, kron_all, pauli, CMatrix, Complex64, ZERO};

pub const ANCILLA: usize = 0;
pub const REGISTER_1: usize = 1;
pub const REGISTER_2: usize = 2;
pub const N_SITES: usize = 3;
pub const FULL_DIM: usize = 8;
pub const REGISTER_DIM: usize = 4;

/// Spin-1/2 operators.
pub fn sx() -> CMatrix {
    pauli::x().scale_real(0.5)
}

pub fn sy() -> CMatrix {
    pauli::y().scale_real(0.5)
}

pub fn sz() -> CMatrix {
    pauli::z().scale_real(0.5)
}

/// `S+ = Sx + i Sy = |0><1|`.
pub fn s_plus() -> CMatrix {
    CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0])
}

pub fn s_minus() -> CMatrix {
    s_plus().adjoint()
}

/// Embeds a single-site operator into a chain of `n_sites` spin-1/2 factors.
pub fn embed(op: &CMatrix, site: usize, n_sites: usize) -> CMatrix {
    let id = CMatrix::identity(2);
    let factors: Vec<&CMatrix> = (0..n_sites).map(|k| if k == site { op } else { &id }).collect();
    kron_all(factors)
}

/// Labeled spin operators: the 2x2 set (`Sx`, `Sy`, `Sz`, `S+`) and their
/// 8x8 site embeddings keyed as `Sx^(a)`, `Sy^(1)`, ...
pub fn build_spin_operators() -> BTreeMap<String, CMatrix> {
    let single = [("Sx", sx()), ("Sy", sy()), ("Sz", sz()), ("S+", s_plus())];
    let mut out = BTreeMap::new();
    for (name, op) in &single {
        out.insert((*name).to_string(), op.clone());
        for (site, label) in [(ANCILLA, "a"), (REGISTER_1, "1"), (REGISTER_2, "2")] {
            out.insert(format!("{name}^({label})"), embed(op, site, N_SITES));
        }
    }
    out
}

/// The four static exchange strengths; the pulse envelope multiplies all of them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExchangeCouplings {
    pub j1: f64,
    pub j2: f64,
    #[serde(default)]
    pub d1: f64,
    #[serde(default)]
    pub d2: f64,
}

impl ExchangeCouplings {
    pub fn new(j1: f64, j2: f64, d1: f64, d2: f64) -> Self {
        Self { j1, j2, d1, d2 }
    }

    /// Pure XY couplings (no Dzyaloshinskii-Moriya term).
    pub fn xy(j1: f64, j2: f64) -> Self {
        Self::new(j1, j2, 0.0, 0.0)
    }

    pub fn alpha1(&self) -> Complex64 {
        c(0.5 * self.j1, 0.5 * self.d1)
    }

    pub fn alpha2(&self) -> Complex64 {
        c(0.5 * self.j2, 0.5 * self.d2)
    }

    /// `omega = sqrt(|alpha1|^2 + |alpha2|^2)`.
    pub fn omega(&self) -> f64 {
        (self.alpha1().norm_sqr() + self.alpha2().norm_sqr()).sqrt()
    }

    /// Same couplings with the DM terms dropped.
    pub fn xy_part(&self) -> Self {
        Self::xy(self.j1, self.j2)
    }

    /// Real couplings realizing a given mixing angle at a given omega.
    pub fn for_theta(theta: f64, omega: f64) -> Self {
        Self::xy(2.0 * omega * theta.cos(), 2.0 * omega * theta.sin())
    }
}

/// Polar form: `alpha1 = omega e^{i phi1} cos(theta)`, `alpha2 = omega e^{i phi2} sin(theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarCouplings {
    pub omega: f64,
    pub theta: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl PolarCouplings {
    pub fn alpha1(&self) -> Complex64 {
        Complex64::from_polar(self.omega * self.theta.cos(), self.phi1)
    }

    pub fn alpha2(&self) -> Complex64 {
        Complex64::from_polar(self.omega * self.theta.sin(), self.phi2)
    }
}

pub fn couplings_to_polar(cp: &ExchangeCouplings) -> Result<PolarCouplings> {
    let (a1, a2) = (cp.alpha1(), cp.alpha2());
    let omega = cp.omega();
    if !(omega > 0.0) {
        return Err(Error::ZeroCoupling);
    }
    // arg(0) is 0, which keeps phi well defined on the theta = 0, pi/2 edges.
    Ok(PolarCouplings { omega, theta: a2.norm().atan2(a1.norm()), phi1: a1.arg(), phi2: a2.arg() })
}

pub fn polar_to_couplings(p: &PolarCouplings) -> ExchangeCouplings {
    let (a1, a2) = (p.alpha1(), p.alpha2());
    ExchangeCouplings::new(2.0 * a1.re, 2.0 * a2.re, 2.0 * a1.im, 2.0 * a2.im)
}

/// The chain Hamiltonians together with the exchange matrix and its factors.
#[derive(Debug, Clone)]
pub struct HamiltonianSet {
    pub couplings: ExchangeCouplings,
    pub polar: Option<PolarCouplings>,
    pub h_xy: CMatrix,
    pub h_dm: CMatrix,
    /// `h_xy + h_dm`; the full generator is `Omega(t) * h_eff`.
    pub h_eff: CMatrix,
    pub w: CMatrix,
    pub v0: CMatrix,
    pub t_diag: [f64; 4],
    pub v1: CMatrix,
}

impl HamiltonianSet {
    pub fn omega(&self) -> f64 {
        self.couplings.omega()
    }
}

fn xy_bond(j: f64, left: usize, right: usize) -> CMatrix {
    let (x, y) = (sx(), sy());
    let xx = embed(&x, left, N_SITES) * embed(&x, right, N_SITES);
    let yy = embed(&y, left, N_SITES) * embed(&y, right, N_SITES);
    (xx + yy).scale_real(j)
}

fn dm_bond(d: f64, left: usize, right: usize) -> CMatrix {
    let (x, y) = (sx(), sy());
    let xy = embed(&x, left, N_SITES) * embed(&y, right, N_SITES);
    let yx = embed(&y, left, N_SITES) * embed(&x, right, N_SITES);
    (xy - yx).scale_real(d)
}

/// `J1 (Sx1 Sxa + Sy1 Sya) + J2 (Sxa Sx2 + Sya Sy2)`.
pub fn xy_hamiltonian(j1: f64, j2: f64) -> CMatrix {
    xy_bond(j1, REGISTER_1, ANCILLA) + xy_bond(j2, ANCILLA, REGISTER_2)
}

/// `D1 (Sx1 Sya - Sy1 Sxa) + D2 (Sxa Sy2 - Sya Sx2)`.
pub fn dm_hamiltonian(d1: f64, d2: f64) -> CMatrix {
    dm_bond(d1, REGISTER_1, ANCILLA) + dm_bond(d2, ANCILLA, REGISTER_2)
}

/// The two bonds of the chain separately: `(arm 1-a, arm a-2)`. They sum to
/// `h_eff` and do not commute with each other.
pub fn arm_hamiltonians(cp: &ExchangeCouplings) -> (CMatrix, CMatrix) {
    let arm1 = xy_bond(cp.j1, REGISTER_1, ANCILLA) + dm_bond(cp.d1, REGISTER_1, ANCILLA);
    let arm2 = xy_bond(cp.j2, ANCILLA, REGISTER_2) + dm_bond(cp.d2, ANCILLA, REGISTER_2);
    (arm1, arm2)
}

/// Exchange matrix on the register space, `<0 s1 s2| H |1 s1' s2'>`.
pub fn exchange_matrix(cp: &ExchangeCouplings) -> CMatrix {
    let (a1, a2) = (cp.alpha1(), cp.alpha2());
    let mut w = CMatrix::zeros(4, 4);
    w[(1, 0)] = a2;
    w[(2, 0)] = a1.conj();
    w[(3, 1)] = a1.conj();
    w[(3, 2)] = a2;
    w
}

/// `S+^(a) (x) W + h.c.`
pub fn block_hamiltonian(w: &CMatrix) -> CMatrix {
    let mut h = CMatrix::zeros(FULL_DIM, FULL_DIM);
    h.set_block(0, REGISTER_DIM, w);
    h.set_block(REGISTER_DIM, 0, &w.adjoint());
    h
}

/// Closed-form factors of `W = V0 diag(0, 0, omega, omega) V1^dagger`.
pub fn closed_form_factors(p: &PolarCouplings) -> (CMatrix, [f64; 4], CMatrix) {
    let (ct, st) = (p.theta.cos(), p.theta.sin());
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    let one = c(1.0, 0.0);
    #[rustfmt::skip]
    let v0 = CMatrix::from_row_slice(4, 4, &[
        one,  ZERO,                    ZERO, ZERO,
        ZERO, e(p.phi1) * ct,          ZERO, e(p.phi2) * st,
        ZERO, -e(-p.phi2) * st,        ZERO, e(-p.phi1) * ct,
        ZERO, ZERO,                    one,  ZERO,
    ]);
    #[rustfmt::skip]
    let v1 = CMatrix::from_row_slice(4, 4, &[
        ZERO, ZERO,             ZERO,            one,
        ZERO, e(p.phi2) * st,   e(p.phi1) * ct,  ZERO,
        ZERO, -e(-p.phi1) * ct, e(-p.phi2) * st, ZERO,
        one,  ZERO,             ZERO,            ZERO,
    ]);
    (v0, [0.0, 0.0, p.omega, p.omega], v1)
}

/// Assembles every chain operator for a coupling set.
///
/// With all couplings zero the polar form is undefined; `v0`/`v1` then fall
/// back to the theta = phi = 0 factors, which still satisfy `W = V0 T V1^dagger`
/// because `T` vanishes.
pub fn build_hamiltonians(cp: &ExchangeCouplings) -> HamiltonianSet {
    let h_xy = xy_hamiltonian(cp.j1, cp.j2);
    let h_dm = dm_hamiltonian(cp.d1, cp.d2);
    let h_eff = &h_xy + &h_dm;
    let w = exchange_matrix(cp);
    let polar = couplings_to_polar(cp).ok();
    let fallback = PolarCouplings { omega: 0.0, theta: 0.0, phi1: 0.0, phi2: 0.0 };
    let (v0, t_diag, v1) = closed_form_factors(polar.as_ref().unwrap_or(&fallback));
    HamiltonianSet { couplings: *cp, polar, h_xy, h_dm, h_eff, w, v0, t_diag, v1 }
}

/// Projector onto the ancilla-`|0>` subspace, `|0><0| (x) 1_4`.
pub fn ancilla_zero_projector() -> CMatrix {
    let mut p = CMatrix::zeros(FULL_DIM, FULL_DIM);
    for i in 0..REGISTER_DIM {
        p[(i, i)] = c(1.0, 0.0);
    }
    p
}

/// Ancilla parity `sigma_z (x) 1_4`.
pub fn ancilla_parity() -> CMatrix {
    embed(&pauli::z(), ANCILLA, N_SITES)
}

/// Mixing angle that makes the register gate a special perfect entangler.
pub const SPECIAL_PERFECT_THETA: f64 = FRAC_PI_2 / 2.0;
