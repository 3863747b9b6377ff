// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Failures raised by the simulation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |h - h^dagger| = {deviation:.3e})")]
    NonHermitianInput { deviation: f64 },

    #[error("matrix is not unitary (max |u^dagger u - 1| = {deviation:.3e})")]
    NonUnitaryInput { deviation: f64 },

    #[error("target gate is not unitary (leakage = {leakage:.3e})")]
    NonUnitaryTarget { leakage: f64 },

    #[error("exchange couplings vanish (omega = 0)")]
    ZeroCoupling,

    #[error("time {t} lies outside the pulse window [0, {duration}]")]
    OutOfRange { t: f64, duration: f64 },

    #[error("pulse is not cyclic: area*omega/pi = {ratio:.12} is not an odd integer")]
    NonCyclicPulse { ratio: f64 },

    #[error("Hilbert space dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("Weyl coordinates {0:?} are not in the canonical chamber")]
    NonCanonicalInput([f64; 3]),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("invalid pulse: {0}")]
    InvalidPulse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
