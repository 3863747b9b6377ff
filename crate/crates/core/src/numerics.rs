// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra at the small fixed dimensions used here
//! (2, 4, 8 and 512 for the spin-bath problem).
//!
//! [`CMatrix`] is a thin newtype over `faer::Mat<c64>`. Decompositions come
//! from faer; everything specific to this crate (Hermitian exponentials,
//! Kronecker products, unitarity checks) lives here.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use faer::{Mat, Side};
pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for exact algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense complex matrix, row-major in its constructors and accessors.
#[derive(Clone, PartialEq)]
pub struct CMatrix(Mat<Complex64>);

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(Mat::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(Mat::identity(n, n))
    }

    /// Builds a matrix from row-major entries.
    ///
    /// Panics if `entries.len() != rows * cols`.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must equal rows*cols");
        Self(Mat::from_fn(rows, cols, |i, j| entries[i * cols + j]))
    }

    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Self {
        let data: Vec<Complex64> = entries.iter().map(|&x| c(x, 0.0)).collect();
        Self::from_row_slice(rows, cols, &data)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(Mat::from_fn(rows, cols, f))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { c(diag[i], 0.0) } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    fn entries(&self) -> impl Iterator<Item = Complex64> + '_ {
        let rows = self.rows();
        (0..self.cols()).flat_map(move |j| (0..rows).map(move |i| self.0[(i, j)]))
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self(Mat::from_fn(self.rows(), self.cols(), |i, j| f(self.0[(i, j)])))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint().to_owned())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose().to_owned())
    }

    pub fn conjugate(&self) -> Self {
        Self(self.0.conjugate().to_owned())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows()).map(|i| self.0[(i, i)]).sum()
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    /// Copy of the `rows x cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self(self.0.submatrix(r0, c0, rows, cols).to_owned())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMatrix) {
        self.0.submatrix_mut(r0, c0, b.rows(), b.cols()).copy_from(&b.0);
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows(), self.cols()), (other.rows(), other.cols()), "shape mismatch in max_abs_diff");
        self.entries().zip(other.entries()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |h - h^dagger|.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// max |u^dagger u - 1|.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self.adjoint() * self).max_abs_diff(&CMatrix::identity(self.rows()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        self * other - other * self
    }

    /// Eigenvalues of a general square matrix.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        assert!(self.is_square(), "eigenvalues of a non-square matrix");
        self.0.eigenvalues().expect("eigenvalue iteration failed to converge")
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.0[idx]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<&CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        self.0 += &rhs.0;
    }
}

impl Neg for CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.map(|z| -z)
    }
}

/// Kronecker product; block `(i, j)` of the result is `a[i, j] * b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a sequence, leftmost factor first.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a CMatrix>) -> CMatrix {
    factors.into_iter().fold(CMatrix::identity(1), |acc, f| kron(&acc, f))
}

fn check_hermitian(h: &CMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            actual: format!("{}x{}", h.rows(), h.cols()),
        });
    }
    let deviation = h.hermiticity_deviation();
    // Absolute for unit-scale generators, relative for large ones.
    if deviation > ALGEBRAIC_TOL * h.max_abs().max(1.0) {
        return Err(Error::NonHermitianInput { deviation });
    }
    Ok(())
}

/// Spectral decomposition `h = V diag(values) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Result<Self> {
        check_hermitian(h)?;
        // Symmetrize so the solver sees an exactly Hermitian input.
        let sym = (h + h.adjoint()).scale_real(0.5);
        let eig =
            sym.0.self_adjoint_eigen(Side::Lower).map_err(|_| Error::NonHermitianInput { deviation: f64::NAN })?;
        Ok(Self {
            values: eig.S().column_vector().iter().map(|z| z.re).collect(),
            vectors: CMatrix(eig.U().to_owned()),
        })
    }

    /// `V f(diag) V^dagger` for a scalar function of the eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let v = &self.vectors;
        let fvals: Vec<Complex64> = self.values.iter().map(|&lambda| f(lambda)).collect();
        let scaled = CMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * fvals[j]);
        scaled * v.adjoint()
    }

    /// `exp(-i * scale * h)`.
    pub fn exp_i(&self, scale: f64) -> CMatrix {
        self.map(|lambda| Complex64::from_polar(1.0, -scale * lambda))
    }
}

/// `exp(-i * scale * h)` for Hermitian `h`, through its eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, scale: f64) -> Result<CMatrix> {
    Ok(HermitianEigen::new(h)?.exp_i(scale))
}

/// Singular value decomposition `m = u diag(s) v^dagger`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    /// Non-negative, sorted descending.
    pub s: Vec<f64>,
    pub v: CMatrix,
}

/// SVD of a square matrix with singular values sorted in descending order.
pub fn svd(m: &CMatrix) -> Svd {
    assert!(m.is_square(), "svd is only provided for square matrices");
    let n = m.rows();
    let dec = m.0.svd().expect("svd iteration failed to converge");
    let values: Vec<f64> = dec.S().column_vector().iter().map(|z| z.re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let s = order.iter().map(|&k| values[k]).collect();
    let (u, v) = (dec.U(), dec.V());
    let u = CMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    let v = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Svd { u, s, v }
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let d: Vec<Complex64> = self.s.iter().map(|&x| c(x, 0.0)).collect();
        &self.u * CMatrix::from_diagonal(&d) * self.v.adjoint()
    }
}

/// Pauli matrices and the 2x2 identity.
pub mod pauli {
    use super::*;

    pub fn id() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_real_rows(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }
}
