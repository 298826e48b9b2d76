//! The distributed case `m = 1`: each encoder observes a single source.

use crate::error::Result;
use crate::generalized::rate_from_theta;
use crate::model::{check_distortion, EigenSpectrum, SourceModel};

/// Closed-form solution of the distributed problem at one distortion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributedSolution {
    pub xi: f64,
    pub gamma: f64,
    pub theta: f64,
    pub rate_nats: f64,
    /// Eigenvalues `d - theta` (x `ell-1`) and `d + (ell-1) theta` of the distortion matrix.
    pub spectrum: EigenSpectrum,
}

/// Rate-distortion function of the distributed system, valid for every
/// admissible `rho`. Numerically stable for `d <= 1 - 1e-9`.
pub fn rate_distributed(model: &SourceModel, d: f64) -> Result<DistributedSolution> {
    check_distortion(d)?;
    let (l, rho) = (model.l(), model.rho());
    let apex = 1.0 + (l - 1.0) * rho;
    let product = (1.0 - rho) * apex;
    let xi = apex * (1.0 - rho - d) - (1.0 - rho) * d;
    let disc = (xi * xi + 4.0 * product * d * (1.0 - d)).sqrt();
    // -xi + disc cancels when xi > 0; use the conjugate form there
    let gamma = if xi > 0.0 {
        2.0 * product * d / (xi + disc)
    } else {
        (disc - xi) / (2.0 * (1.0 - d))
    };
    let theta = if rho == 0.0 {
        0.0
    } else {
        rho * d * gamma / (gamma + product)
    };
    let rate_nats = if rho == 0.0 {
        0.5 * l * (1.0 / d).ln()
    } else {
        rate_from_theta(model, d, theta)
    };
    Ok(DistributedSolution {
        xi,
        gamma,
        theta,
        rate_nats,
        spectrum: EigenSpectrum {
            ell: model.ell(),
            bulk: d - theta,
            apex: d + (l - 1.0) * theta,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centralized::rate_centralized;
    use approx::assert_relative_eq;

    #[test]
    fn two_sources_half_correlation() {
        let m = SourceModel::new(2, 0.5).unwrap();
        let s = rate_distributed(&m, 0.5).unwrap();
        assert_relative_eq!(s.xi, -0.25, epsilon = 1e-15);
        assert_relative_eq!(s.gamma, 1.1513878188659974, epsilon = 1e-14);
        assert_relative_eq!(s.theta, 0.15138781886599734, epsilon = 1e-14);
        assert_relative_eq!(s.rate_nats, 0.5973816086435546, epsilon = 1e-13);
        assert_relative_eq!(s.spectrum.trace(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn independent_sources_decouple() {
        let m = SourceModel::new(3, 0.0).unwrap();
        let s = rate_distributed(&m, 0.4).unwrap();
        assert_eq!(s.theta, 0.0);
        assert_relative_eq!(s.rate_nats, 1.5 * (1.0f64 / 0.4).ln(), epsilon = 1e-14);
    }

    #[test]
    fn rate_vanishes_near_unit_distortion() {
        let m = SourceModel::new(3, 0.6).unwrap();
        let mut prev = f64::INFINITY;
        for d in [0.9, 0.99, 0.999, 1.0 - 1e-6, 1.0 - 1e-9] {
            let s = rate_distributed(&m, d).unwrap();
            assert!(s.rate_nats.is_finite() && s.rate_nats >= 0.0);
            assert!(s.rate_nats < prev);
            prev = s.rate_nats;
        }
        assert!(prev < 1e-7);
        assert!(rate_distributed(&m, 1.0).is_err());
    }

    #[test]
    fn strictly_above_centralized_when_correlated() {
        for (ell, rho) in [(2, 0.5), (3, -0.4), (5, 0.9), (6, -0.15)] {
            let m = SourceModel::new(ell, rho).unwrap();
            for i in 1..20 {
                let d = i as f64 / 20.0;
                let s = rate_distributed(&m, d).unwrap();
                assert!(s.rate_nats > rate_centralized(&m, d).unwrap());
                let lambda = m.eigenvalues();
                assert!(s.spectrum.bulk > 0.0 && s.spectrum.bulk <= lambda.bulk);
                assert!(s.spectrum.apex > 0.0 && s.spectrum.apex <= lambda.apex);
                assert!(s.gamma > 0.0);
            }
        }
    }
}
