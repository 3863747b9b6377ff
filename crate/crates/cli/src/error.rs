// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

use holospin_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Numerical(Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(msg) | Error::InvalidPulse(msg) => Self::Config(msg),
            other => Self::Numerical(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Parse(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io(_) => 1,
        }
    }

    /// Extra advice printed after the message, where there is any.
    pub fn hint(&self) -> Option<&'static str> {
        match self {
            Self::Numerical(Error::DimensionOverflow { .. }) => {
                Some("lower noise.bath.nuclei_per_electron or raise noise.bath.dimension_cap")
            }
            Self::Numerical(Error::ZeroCoupling) => Some("at least one of couplings.j1, j2, d1, d2 must be nonzero"),
            _ => None,
        }
    }
}
