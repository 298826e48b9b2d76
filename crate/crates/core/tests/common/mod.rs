#![allow(dead_code)]

use proptest::prelude::*;
use symrd::SourceModel;

/// Admissible `(ell, rho)` pairs kept `1e-6` away from the correlation boundaries.
pub fn arb_model(max_ell: usize) -> impl Strategy<Value = SourceModel> {
    (2..=max_ell, 1e-6f64..1.0 - 1e-6).prop_map(|(ell, u)| {
        let lower = SourceModel::rho_lower_bound(ell);
        SourceModel::new(ell, lower + (1.0 - lower) * u).unwrap()
    })
}

pub fn arb_positive_model(max_ell: usize) -> impl Strategy<Value = SourceModel> {
    (2..=max_ell, 1e-3f64..0.999).prop_map(|(ell, rho)| SourceModel::new(ell, rho).unwrap())
}

pub fn arb_distortion() -> impl Strategy<Value = f64> {
    1e-4f64..1.0 - 1e-4
}
