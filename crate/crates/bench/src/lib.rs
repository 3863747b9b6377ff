// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixed inputs shared by the benchmarks.

use holospin_core::spin::ExchangeCouplings;

/// Couplings with every phase and angle generic (no symmetric special case).
pub fn generic_couplings() -> ExchangeCouplings {
    ExchangeCouplings::new(0.93, -0.41, 0.27, 0.66)
}

/// Equal XY arms: the special perfect entangler.
pub fn balanced_couplings() -> ExchangeCouplings {
    ExchangeCouplings::xy(1.0, 1.0)
}
