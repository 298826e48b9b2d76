//! The centralized case `m = ell`: one encoder observes every source.
//!
//! The rate-distortion function is available in two ways that must agree:
//! the piecewise closed form in [`rate_centralized`], and reverse water-filling
//! over the eigenvalues of the source covariance in [`waterfill`].

use crate::error::Result;
use crate::generalized::critical_distortions_pm;
use crate::model::{check_distortion, EigenSpectrum, ExchangeableMatrix, SourceModel};

/// Reverse water-filling allocation over the eigen-modes of the source covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaterfillSolution {
    /// Per-mode distortions; bulk entries sit on the `ell - 1` repeated modes.
    pub per_mode: EigenSpectrum,
    pub water_level: f64,
    pub rate_nats: f64,
}

/// `1/2 log((1-rho)^(ell-1) (1+(ell-1) rho) / d^ell)`. Negative for large `d`.
pub fn shannon_lower_bound(model: &SourceModel, d: f64) -> Result<f64> {
    check_distortion(d)?;
    Ok(0.5 * (model.log_det_covariance() - model.l() * d.ln()))
}

/// The critical distortion at which water-filling starts leaving modes uncoded:
/// the smallest source eigenvalue.
fn branch_threshold(model: &SourceModel) -> f64 {
    let (minus, plus) = critical_distortions_pm(model);
    if model.rho() <= 0.0 {
        minus
    } else {
        plus
    }
}

/// Closed-form rate-distortion function of the centralized system, in nats.
pub fn rate_centralized(model: &SourceModel, d: f64) -> Result<f64> {
    check_distortion(d)?;
    let (l, rho) = (model.l(), model.rho());
    if rho == 0.0 {
        return Ok(0.5 * l * (1.0 / d).ln());
    }
    if d <= branch_threshold(model) {
        return shannon_lower_bound(model, d);
    }
    let rate = if rho < 0.0 {
        0.5 * (l - 1.0) * ((l - 1.0) * (1.0 - rho) / (l * d - 1.0 - (l - 1.0) * rho)).ln()
    } else {
        0.5 * ((1.0 + (l - 1.0) * rho) / (l * d - (l - 1.0) * (1.0 - rho))).ln()
    };
    Ok(rate)
}

/// Reverse water-filling over an arbitrary spectrum: returns per-mode
/// distortions `min(level, lambda_i)` whose mean is `mean_target`, and the level.
///
/// Requires `0 < mean_target < mean(lambdas)`; a mode whose eigenvalue does
/// not exceed the water level is left uncoded.
pub fn reverse_waterfill(lambdas: &[f64], mean_target: f64) -> (Vec<f64>, f64) {
    let n = lambdas.len();
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let budget = n as f64 * mean_target;
    let mut uncoded_sum = 0.0;
    let mut level = mean_target;
    for (k, &lam) in sorted.iter().enumerate() {
        level = (budget - uncoded_sum) / (n - k) as f64;
        if level < lam {
            break;
        }
        uncoded_sum += lam;
    }
    let alloc = lambdas.iter().map(|&lam| level.min(lam)).collect();
    (alloc, level)
}

/// Reverse water-filling specialized to the exchangeable source spectrum.
pub fn waterfill(model: &SourceModel, d: f64) -> Result<WaterfillSolution> {
    check_distortion(d)?;
    let lambda = model.eigenvalues();
    let l = model.l();
    let level = if d <= lambda.min() {
        d
    } else if lambda.bulk < lambda.apex {
        l * d - (l - 1.0) * lambda.bulk
    } else {
        (l * d - lambda.apex) / (l - 1.0)
    };
    let per_mode = EigenSpectrum {
        ell: model.ell(),
        bulk: level.min(lambda.bulk),
        apex: level.min(lambda.apex),
    };
    Ok(WaterfillSolution {
        per_mode,
        water_level: level,
        rate_nats: lambda.half_log_ratio(&per_mode),
    })
}

/// Off-diagonal entry of the optimal centralized distortion matrix.
pub fn theta_centralized(model: &SourceModel, d: f64) -> Result<f64> {
    check_distortion(d)?;
    let rho = model.rho();
    if rho == 0.0 || d <= branch_threshold(model) {
        return Ok(0.0);
    }
    Ok(if rho < 0.0 {
        (1.0 - d) / (model.l() - 1.0) + rho
    } else {
        d - 1.0 + rho
    })
}

/// Optimal distortion covariance of the centralized system: `d` on the
/// diagonal, `theta` off it.
pub fn distortion_matrix_centralized(model: &SourceModel, d: f64) -> Result<ExchangeableMatrix> {
    Ok(ExchangeableMatrix::new(
        model.ell(),
        d,
        theta_centralized(model, d)?,
    ))
}
