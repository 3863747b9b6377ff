// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

pub mod error;
pub mod holonomy;
pub mod metrics;
pub mod noise;
pub mod numerics;
pub mod propagation;
pub mod spin;

pub use error::{Error, Result};
pub use holonomy::RegisterGate;
pub use metrics::{EntanglerClass, GateMetrics};
pub use numerics::{CMatrix, Complex64};
