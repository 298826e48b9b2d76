//! Large-`ell` behaviour of the plus-channel bound for `rho in (0, 1)`.
//!
//! The expansions keep only their explicit terms; [`ExpansionValue::order_dropped`]
//! names the size of what was discarded so callers can test the residual's
//! scaling instead of its absolute value. They are meaningful for `ell >= 50`
//! or so.

use crate::error::{Error, Result};
use crate::model::check_distortion;

/// Distances to a regime boundary below this are treated as being on it.
pub const REGIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `d <= d_c^(m)`.
    BelowDcm,
    /// `d_c^(m) < d < d_c^+`.
    Between,
    /// `d = d_c^+`.
    AtCritical,
    /// `d > d_c^+`.
    AboveCritical,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::BelowDcm => "below-dcm",
            Regime::Between => "between",
            Regime::AtCritical => "at-critical",
            Regime::AboveCritical => "above-critical",
        }
    }
}

/// A truncated expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionValue {
    pub value_nats: f64,
    pub regime: Regime,
    /// `"O(1/ell)"` or `"O(1/sqrt(ell))"`.
    pub order_dropped: &'static str,
    /// Whether the expanded quantity is known to be the true rate rather than an upper bound.
    pub tight: bool,
}

const ORDER_ELL: &str = "O(1/ell)";
const ORDER_SQRT_ELL: &str = "O(1/sqrt(ell))";

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(Error::CorrelationOutOfRange { rho, lower: 0.0 })
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::SubsetSize { ell: 0, m, min: 1 });
    }
    Ok(())
}

/// Limit of the critical distortion as `ell` grows with `m` fixed: `(m-1)(1-rho)/m`.
pub fn dcm_limit(m: usize, rho: f64) -> f64 {
    let mf = m as f64;
    (mf - 1.0) * (1.0 - rho) / mf
}

/// Which expansion applies at `d`; points within [`REGIME_TOL`] of `d_c^(m)`
/// count as below it and points that close to `d_c^+` as on it.
pub fn regime_of(m: usize, rho: f64, d: f64) -> Regime {
    let plus = 1.0 - rho;
    if d <= dcm_limit(m, rho) + REGIME_TOL {
        Regime::BelowDcm
    } else if (d - plus).abs() <= REGIME_TOL {
        Regime::AtCritical
    } else if d < plus {
        Regime::Between
    } else {
        Regime::AboveCritical
    }
}

/// `ell/2 log((1-rho)/d) + 1/2 log ell`, the part shared by the low-distortion rows.
fn leading(ell: f64, rho: f64, d: f64) -> f64 {
    0.5 * ell * ((1.0 - rho) / d).ln() + 0.5 * ell.ln()
}

/// Truncated large-`ell` expansion of the plus-channel bound on the `(ell, m)` rate.
pub fn expansion_rate(ell: usize, m: usize, rho: f64, d: f64) -> Result<ExpansionValue> {
    check_rho(rho)?;
    check_m(m)?;
    check_distortion(d)?;
    let (l, mf) = (ell as f64, m as f64);
    let regime = regime_of(m, rho, d);
    let gap = 1.0 - rho - d;
    let value_nats = match regime {
        Regime::BelowDcm => leading(l, rho, d) + 0.5 * (rho / (1.0 - rho)).ln(),
        Regime::Between => {
            leading(l, rho, d)
                + (d - (mf - 1.0) * gap) / (2.0 * mf * gap)
                + 0.5 * (mf * rho * gap / ((1.0 - rho) * (1.0 - rho))).ln()
        }
        Regime::AtCritical => {
            l.sqrt() / (2.0 * mf.sqrt()) + 0.25 * l.ln() + 0.5 * (mf.sqrt() * rho / (1.0 - rho)).ln()
                - (1.0 + (mf - 1.0) * rho) / (4.0 * mf * rho)
        }
        Regime::AboveCritical => {
            let excess = d - 1.0 + rho;
            0.5 * (rho / excess).ln() + (1.0 - rho) * (1.0 - d) / (2.0 * mf * rho * excess)
        }
    };
    Ok(ExpansionValue {
        value_nats,
        regime,
        order_dropped: if regime == Regime::AtCritical {
            ORDER_SQRT_ELL
        } else {
            ORDER_ELL
        },
        tight: m == 1 || regime == Regime::BelowDcm,
    })
}

/// Limit of (plus-channel bound - centralized rate) as `ell` grows; infinite at `d = 1 - rho`.
pub fn delta_gap(m: usize, rho: f64, d: f64) -> Result<f64> {
    check_rho(rho)?;
    check_m(m)?;
    check_distortion(d)?;
    let mf = m as f64;
    let gap = 1.0 - rho - d;
    Ok(match regime_of(m, rho, d) {
        Regime::BelowDcm => 0.0,
        Regime::Between => {
            (1.0 - rho - mf * gap) / (2.0 * mf * gap) + 0.5 * (mf * gap / (1.0 - rho)).ln()
        }
        Regime::AtCritical => f64::INFINITY,
        Regime::AboveCritical => (1.0 - rho) * (1.0 - d) / (2.0 * mf * rho * (d - 1.0 + rho)),
    })
}

/// Limit of the per-source rate `r / ell`, the same for every `m`.
pub fn per_encoder_limit(_m: usize, rho: f64, d: f64) -> Result<f64> {
    check_rho(rho)?;
    check_distortion(d)?;
    Ok(if d < 1.0 - rho {
        0.5 * ((1.0 - rho) / d).ln()
    } else {
        0.0
    })
}

/// Truncated large-`ell` expansion of the centralized rate. Regimes are
/// reported relative to `d_c^+` only, with everything below it as `BelowDcm`.
pub fn centralized_expansion(ell: usize, rho: f64, d: f64) -> Result<ExpansionValue> {
    check_rho(rho)?;
    check_distortion(d)?;
    let l = ell as f64;
    let plus = 1.0 - rho;
    let shift = 0.5 * (rho / (1.0 - rho)).ln();
    let (value_nats, regime) = if (d - plus).abs() <= REGIME_TOL {
        (0.5 * l.ln() + shift, Regime::AtCritical)
    } else if d < plus {
        (leading(l, rho, d) + shift, Regime::BelowDcm)
    } else {
        (0.5 * (rho / (d - 1.0 + rho)).ln(), Regime::AboveCritical)
    };
    Ok(ExpansionValue {
        value_nats,
        regime,
        order_dropped: ORDER_ELL,
        tight: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centralized::rate_centralized;
    use crate::model::SourceModel;
    use approx::assert_relative_eq;

    #[test]
    fn dcm_examples() {
        assert_relative_eq!(dcm_limit(2, 0.6), 0.2, epsilon = 1e-15);
        assert_eq!(dcm_limit(1, 0.37), 0.0);
        assert_relative_eq!(dcm_limit(4, 0.3), 0.525, epsilon = 1e-15);
        assert_relative_eq!(dcm_limit(3, 0.6), 4.0 / 15.0, epsilon = 1e-15);
        assert!((dcm_limit(1_000_000, 0.3) - 0.7).abs() < 1e-6);
    }

    #[test]
    fn regime_selection() {
        let below = expansion_rate(1000, 3, 0.6, 0.2).unwrap();
        assert_eq!(below.regime, Regime::BelowDcm);
        assert!(below.tight);
        let l = 1000.0f64;
        assert_relative_eq!(
            below.value_nats,
            l / 2.0 * 2.0f64.ln() + 0.5 * l.ln() + 0.5 * 1.5f64.ln(),
            max_relative = 1e-14
        );
        assert_eq!(expansion_rate(1000, 3, 0.6, 0.3).unwrap().regime, Regime::Between);
        let at = expansion_rate(1000, 2, 0.6, 1.0 - 0.6).unwrap();
        assert_eq!(at.regime, Regime::AtCritical);
        assert_eq!(at.order_dropped, "O(1/sqrt(ell))");
        assert!(!at.tight);
        assert_eq!(expansion_rate(1000, 2, 0.6, 0.5).unwrap().regime, Regime::AboveCritical);
        // within tolerance of d_c^(m) counts as below it
        assert_eq!(expansion_rate(1000, 2, 0.6, 0.2 + 5e-13).unwrap().regime, Regime::BelowDcm);
    }

    #[test]
    fn above_critical_example() {
        let v = expansion_rate(10_000, 1, 0.6, 0.5).unwrap();
        assert_relative_eq!(v.value_nats, 0.5 * 6.0f64.ln() + 0.2 / 0.12, epsilon = 1e-12);
        assert_relative_eq!(v.value_nats, 2.56255, epsilon = 1e-5);
        assert!(v.tight);
    }

    #[test]
    fn at_critical_leading_term() {
        let v = expansion_rate(10_000, 4, 0.3, 0.7).unwrap();
        let rest = 0.25 * 10_000f64.ln() + 0.5 * (2.0 * 0.3 / 0.7f64).ln() - 1.9 / 4.8;
        assert_relative_eq!(v.value_nats, 100.0 / 4.0 + rest, epsilon = 1e-12);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_gap(3, 0.6, 0.2).unwrap(), 0.0);
        assert_relative_eq!(delta_gap(1, 0.6, 0.5).unwrap(), 0.2 / 0.12, epsilon = 1e-12);
        assert_eq!(delta_gap(2, 0.6, 0.4).unwrap(), f64::INFINITY);
        let mut prev = 0.0;
        for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
            let v = delta_gap(2, 0.6, 0.4 - eps).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(prev > 100.0);
        for i in 1..50 {
            let d = i as f64 / 50.0;
            assert!(delta_gap(1, 0.3, d).unwrap() > 0.0);
        }
    }

    #[test]
    fn per_encoder_examples() {
        assert_relative_eq!(per_encoder_limit(2, 0.6, 0.2).unwrap(), 0.5 * 2.0f64.ln(), epsilon = 1e-15);
        assert_eq!(per_encoder_limit(2, 0.6, 0.7).unwrap(), 0.0);
        assert_relative_eq!(per_encoder_limit(3, 1e-12, 0.5).unwrap(), 0.5 * 2.0f64.ln(), epsilon = 1e-11);
        assert!(per_encoder_limit(3, 0.0, 0.5).is_err());
    }

    #[test]
    fn centralized_expansion_close_to_exact() {
        let ell = 10_000;
        for (rho, d) in [(0.3, 0.5), (0.3, 0.8), (0.6, 0.1), (0.6, 0.4)] {
            let model = SourceModel::new(ell, rho).unwrap();
            let exact = rate_centralized(&model, d).unwrap();
            let approx = centralized_expansion(ell, rho, d).unwrap().value_nats;
            assert!((exact - approx).abs() < 5.0 / ell as f64, "rho={rho} d={d}");
        }
    }

    #[test]
    fn rejects_nonpositive_correlation() {
        assert!(expansion_rate(100, 2, -0.1, 0.5).is_err());
        assert!(delta_gap(2, 0.0, 0.5).is_err());
        assert!(centralized_expansion(100, 1.0, 0.5).is_err());
        assert!(expansion_rate(100, 0, 0.5, 0.5).is_err());
    }
}
