//! Generalized `(ell, m)` systems: one encoder per size-`m` subset of sources.
//!
//! Two Gaussian test-channel families parameterized by a noise variance `gamma`
//! produce exchangeable distortion matrices:
//!
//! * the *minus* channel applies the `m x m` centering matrix to each subset and
//!   yields `(d_minus, theta_minus)`; it proves the centralized rate is achievable
//!   for every distortion when `rho <= 0`;
//! * the *plus* channel observes the noisy sum of each subset and yields
//!   `(d_plus, theta_plus)` through the coefficients in [`EtaCoefficients`]; for
//!   `rho > 0` it gives the upper bound [`upper_bound_rate`], which is exact below
//!   the critical distortion [`critical_distortion`].
//!
//! Binomial coefficients grow without bound in `ell`, so every evaluation path
//! works with quantities divided by `C(ell-1, m-1)` and substitutes the ratios
//! `C(ell-2, m-1)/C(ell-1, m-1) = (ell-m)/(ell-1)` and
//! `C(ell-2, m-2)/C(ell-1, m-1) = (m-1)/(ell-1)` symbolically.

use crate::centralized::{rate_centralized, shannon_lower_bound, theta_centralized};
use crate::distributed::rate_distributed;
use crate::error::{Error, Result};
use crate::model::{check_distortion, ExchangeableMatrix, SourceModel};

/// Largest integer below which every `f64` is an exact integer.
const EXACT_INTEGER_LIMIT: f64 = 9_007_199_254_740_992.0;

/// `C(n, k)` as a float, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn check_subset(model: &SourceModel, m: usize, min: usize) -> Result<()> {
    if m < min || m > model.ell() {
        return Err(Error::SubsetSize {
            ell: model.ell(),
            m,
            min,
        });
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 || gamma == f64::INFINITY {
        Ok(())
    } else {
        Err(Error::NoiseVariance(gamma))
    }
}

/// `(d_c^-, d_c^+) = (1 + (ell-1) rho, 1 - rho)`.
pub fn critical_distortions_pm(model: &SourceModel) -> (f64, f64) {
    (1.0 + (model.l() - 1.0) * model.rho(), 1.0 - model.rho())
}

/// Distortion below which an `(ell, m)` system matches the centralized one
/// when `rho > 0`. Zero at `m = 1`, `1 - rho` at `m = ell`.
pub fn critical_distortion(model: &SourceModel, m: usize) -> Result<f64> {
    check_subset(model, m, 1)?;
    let rho = model.rho();
    if rho <= 0.0 {
        return Err(Error::NeedsPositiveCorrelation("critical distortion"));
    }
    if m == 1 {
        return Ok(0.0);
    }
    if m == model.ell() {
        return Ok(1.0 - rho);
    }
    let (l, mf) = (model.l(), m as f64);
    Ok(1.0
        - (l - 1.0) * rho * (1.0 + (mf - 1.0) * rho)
            / ((l - 1.0) * mf * rho + (mf - 1.0) * (1.0 - rho)))
}

/// Coefficients of the plus test channel.
///
/// `eta1..eta4` are the raw values; they contain products of binomials and
/// overflow (or lose integer exactness) for moderately large `ell`, which is
/// reported by `overflow`. `scaled` holds `eta2..eta4 / C(ell-1, m-1)` and
/// `eta1 / C(ell-1, m-1)^2`, which stay finite for any `ell` and are what the
/// rest of the module evaluates with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaCoefficients {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
    pub eta4: f64,
    pub scaled: ScaledEta,
    pub overflow: bool,
}

/// Plus-channel coefficients normalized by `C(ell-1, m-1)` (and its square for `eta1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledEta {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
    pub eta4: f64,
}

impl ScaledEta {
    fn new(model: &SourceModel, m: usize) -> Self {
        let (l, mf, rho) = (model.l(), m as f64, model.rho());
        // C(l-2, m-1)/C(l-1, m-1) and its product with (l-1)
        let p = (l - mf) / (l - 1.0);
        let ratio_sq = 1.0 + (mf - 1.0) * rho;
        let pair_sum = 1.0 + (l - 2.0) * rho;
        Self {
            eta1: p * mf * (1.0 - rho) * (1.0 + (l - 1.0) * rho),
            eta2: ratio_sq
                + p * mf * pair_sum
                + (mf - 1.0) * mf * rho
                + (mf - 1.0) * (mf - 1.0) * (1.0 - rho) / (l - 1.0),
            eta3: ratio_sq + (l - mf) * mf * rho * rho + (mf - 1.0) * rho * ratio_sq,
            eta4: rho * ratio_sq
                + p * mf * rho * pair_sum
                + (mf - 1.0) / (l - 1.0) * pair_sum * ratio_sq,
        }
    }

    /// `(d_plus, theta_plus)` at scaled noise variance `g = gamma / C(ell-1, m-1)`.
    fn channel(&self, rho: f64, g: f64) -> (f64, f64) {
        if g > 1.0 {
            // divide through by g^2 so an infinite variance is harmless
            let t = 1.0 / g;
            let den = 1.0 + self.eta2 * t + self.eta1 * t * t;
            (
                1.0 - (self.eta3 * t + self.eta1 * t * t) / den,
                rho - (self.eta4 * t + self.eta1 * rho * t * t) / den,
            )
        } else {
            let den = g * g + self.eta2 * g + self.eta1;
            (
                1.0 - (self.eta3 * g + self.eta1) / den,
                rho - (self.eta4 * g + self.eta1 * rho) / den,
            )
        }
    }

    /// Positive root `g` of `d_plus(g) = d`, in cancellation-free form.
    fn root(&self, d: f64) -> f64 {
        let b = self.eta3 - self.eta2 * (1.0 - d);
        let disc = (b * b + 4.0 * self.eta1 * d * (1.0 - d)).sqrt();
        if b >= 0.0 {
            (b + disc) / (2.0 * (1.0 - d))
        } else {
            2.0 * self.eta1 * d / (disc - b)
        }
    }

    /// `theta_plus` at a point already known to satisfy `d_plus(g) = d`.
    fn theta_at(&self, rho: f64, g: f64, d: f64) -> f64 {
        (rho * g + self.eta2 * rho - self.eta4) * d / (g + self.eta2 - self.eta3)
    }
}

/// Raw and scaled plus-channel coefficients, with the conventions
/// `C(ell-2, ell-1) = C(ell-2, -1) = 0`.
pub fn eta_coefficients(model: &SourceModel, m: usize) -> Result<EtaCoefficients> {
    check_subset(model, m, 1)?;
    let (l, mf, rho) = (model.l(), m as f64, model.rho());
    let (li, mi) = (model.ell() as i64, m as i64);
    let c_top = binomial(li - 1, mi - 1);
    let c_out = binomial(li - 2, mi - 1);
    let c_in = binomial(li - 2, mi - 2);
    let ratio_sq = 1.0 + (mf - 1.0) * rho;
    let pair_sum = 1.0 + (l - 2.0) * rho;

    let eta1 = c_top * c_out * mf * (1.0 - rho) * (1.0 + (l - 1.0) * rho);
    let eta2 = c_top * ratio_sq
        + c_out * mf * pair_sum
        + c_in * ((l - 1.0) * mf * rho + (mf - 1.0) * (1.0 - rho));
    let eta3 = c_top * ratio_sq + c_out * (l - 1.0) * mf * rho * rho + c_in * (l - 1.0) * rho * ratio_sq;
    let eta4 = c_top * rho * ratio_sq + c_out * mf * rho * pair_sum + c_in * pair_sum * ratio_sq;

    let overflow = [eta1, eta2, eta3, eta4].iter().any(|v| !v.is_finite())
        || c_top * c_out * mf > EXACT_INTEGER_LIMIT;
    Ok(EtaCoefficients {
        eta1,
        eta2,
        eta3,
        eta4,
        scaled: ScaledEta::new(model, m),
        overflow,
    })
}

/// Which test-channel family realizes a distortion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestChannel {
    /// Centered subset observations; used when `rho < 0`.
    Minus,
    /// Noisy subset sums; used when `rho > 0`.
    Plus,
}

/// Plus channel, for any admissible `rho`: diagonal and off-diagonal entries of `cov(X | U_S, all S)` at noise variance `gamma`.
pub fn d_plus_theta_plus(model: &SourceModel, m: usize, gamma: f64) -> Result<(f64, f64)> {
    check_subset(model, m, 1)?;
    check_gamma(gamma)?;
    let scale = binomial(model.ell() as i64 - 1, m as i64 - 1);
    Ok(ScaledEta::new(model, m).channel(model.rho(), gamma / scale))
}

/// `theta_plus` at a given `(gamma, d)` pair via the cancellation-free ratio
/// `(rho g + eta2 rho - eta4) d / (g + eta2 - eta3)`; only meaningful when `d = d_plus(gamma)`.
pub fn theta_plus_at(model: &SourceModel, m: usize, gamma: f64, d: f64) -> Result<f64> {
    check_subset(model, m, 1)?;
    check_gamma(gamma)?;
    let scale = binomial(model.ell() as i64 - 1, m as i64 - 1);
    Ok(ScaledEta::new(model, m).theta_at(model.rho(), gamma / scale, d))
}

/// Minus channel: diagonal and off-diagonal entries of `cov(X | U^-_S, all S)`.
pub fn d_minus_theta_minus(model: &SourceModel, m: usize, gamma: f64) -> Result<(f64, f64)> {
    check_subset(model, m, 2)?;
    check_gamma(gamma)?;
    let scale = binomial(model.ell() as i64 - 2, m as i64 - 2);
    Ok(minus_channel(model, gamma / scale))
}

fn minus_channel(model: &SourceModel, g: f64) -> (f64, f64) {
    let (l, rho) = (model.l(), model.rho());
    let gap = 1.0 - rho;
    let den = g + l * gap;
    (1.0 - (l - 1.0) * gap * gap / den, rho + gap * gap / den)
}

/// Noise variance at which the test channel's off-diagonal distortion vanishes.
///
/// For `rho > 0` this is the plus-channel value, whose distortion is the
/// critical distortion; for `rho < 0` the minus-channel value, whose distortion is `d_c^-`.
pub fn gamma_critical(model: &SourceModel, m: usize) -> Result<f64> {
    check_subset(model, m, 2)?;
    let rho = model.rho();
    if rho == 0.0 {
        return Err(Error::IndependentSources("critical noise variance"));
    }
    let c_in = binomial(model.ell() as i64 - 2, m as i64 - 2);
    Ok(c_in * (1.0 - rho) * (1.0 + (model.l() - 1.0) * rho) / rho.abs())
}

/// Test-channel noise variance achieving a prescribed distortion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSolution {
    /// `gamma / scale`; finite even when `gamma` itself overflows.
    pub gamma_scaled: f64,
    /// `C(ell-1, m-1)` for the plus channel, `C(ell-2, m-2)` for the minus channel.
    pub scale: f64,
    pub channel: TestChannel,
    /// Off-diagonal distortion of the channel at this `gamma`.
    pub theta: f64,
    /// Diagonal distortion recomputed from `gamma`; equals the requested `d`.
    pub d_check: f64,
}

impl GammaSolution {
    pub fn gamma(&self) -> f64 {
        self.gamma_scaled * self.scale
    }
}

/// Solves `d_plus(gamma) = d` (`rho > 0`) or `d_minus(gamma) = d` (`rho < 0`) for `gamma > 0`.
pub fn gamma_of_d(model: &SourceModel, m: usize, d: f64) -> Result<GammaSolution> {
    check_distortion(d)?;
    let (l, rho) = (model.l(), model.rho());
    if rho == 0.0 {
        return Err(Error::IndependentSources("test-channel noise variance"));
    }
    if rho < 0.0 {
        check_subset(model, m, 2)?;
        let lower = critical_distortions_pm(model).0 / l;
        if d <= lower {
            return Err(Error::DistortionNotAdmissible { d, lower, upper: 1.0 });
        }
        let g = (1.0 - rho) * ((l - 1.0) * (1.0 - rho) - l * (1.0 - d)) / (1.0 - d);
        let (d_check, theta) = minus_channel(model, g);
        return Ok(GammaSolution {
            gamma_scaled: g,
            scale: binomial(model.ell() as i64 - 2, m as i64 - 2),
            channel: TestChannel::Minus,
            theta,
            d_check,
        });
    }
    check_subset(model, m, 1)?;
    let eta = ScaledEta::new(model, m);
    let g = eta.root(d);
    if g.is_nan() || g <= 0.0 {
        // only reachable at m = ell, where eta1 vanishes and small d has no preimage
        let (floor, _) = eta.channel(rho, 0.0);
        return Err(Error::DistortionNotAdmissible {
            d,
            lower: floor,
            upper: 1.0,
        });
    }
    let (d_check, _) = eta.channel(rho, g);
    Ok(GammaSolution {
        gamma_scaled: g,
        scale: binomial(model.ell() as i64 - 1, m as i64 - 1),
        channel: TestChannel::Plus,
        theta: eta.theta_at(rho, g, d),
        d_check,
    })
}

/// Why a rate value is (or is not) the true rate-distortion function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Justification {
    /// `rho = 0`: every system decouples into independent scalar problems.
    IndependentSources,
    /// `m = ell`: the centralized system.
    Centralized,
    /// `m = 1`: the distributed system.
    Distributed,
    /// `rho < 0`, `m >= 2`: the centralized rate is achievable at every distortion.
    NonPositiveCorrelation,
    /// `rho > 0`, `d <= d_c^(ell,m)`: the centralized rate is achievable.
    BelowCriticalDistortion,
    /// `rho > 0`, `1 < m < ell`, `d > d_c^(ell,m)`: only an upper bound is known.
    BoundOnly,
}

impl Justification {
    pub fn is_exact(self) -> bool {
        self != Justification::BoundOnly
    }

    pub fn label(self) -> &'static str {
        match self {
            Justification::IndependentSources => "independent-sources",
            Justification::Centralized => "centralized",
            Justification::Distributed => "distributed",
            Justification::NonPositiveCorrelation => "non-positive-correlation",
            Justification::BelowCriticalDistortion => "below-critical-distortion",
            Justification::BoundOnly => "bound-only",
        }
    }
}

/// The Berger-Tung upper bound on the `(ell, m)` rate and its distortion matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub rate_nats: f64,
    pub theta: f64,
    pub exact: bool,
    pub justification: Justification,
    pub distortion_matrix: ExchangeableMatrix,
}

/// `1/2 log(det Sigma / det D)` for `D` with diagonal `d` and off-diagonal `theta`.
pub(crate) fn rate_from_theta(model: &SourceModel, d: f64, theta: f64) -> f64 {
    let (l, rho) = (model.l(), model.rho());
    let bulk = (l - 1.0) * ((-rho).ln_1p() - d.ln() - (-theta / d).ln_1p());
    let apex = ((l - 1.0) * rho).ln_1p() - (d + (l - 1.0) * theta).ln();
    0.5 * (bulk + apex)
}

/// Off-diagonal distortion of the plus-channel bound for `rho > 0`: zero up to
/// the critical distortion, `theta_plus(gamma(d))` beyond it.
fn theta_plus_bound(model: &SourceModel, m: usize, d: f64) -> Result<f64> {
    if d <= critical_distortion(model, m)? {
        return Ok(0.0);
    }
    let eta = ScaledEta::new(model, m);
    let g = eta.root(d);
    Ok(eta.theta_at(model.rho(), g, d))
}

fn justify(model: &SourceModel, m: usize, d: f64) -> Result<Justification> {
    let rho = model.rho();
    Ok(if rho == 0.0 {
        Justification::IndependentSources
    } else if m == model.ell() {
        Justification::Centralized
    } else if m == 1 {
        Justification::Distributed
    } else if rho < 0.0 {
        Justification::NonPositiveCorrelation
    } else if d <= critical_distortion(model, m)? {
        Justification::BelowCriticalDistortion
    } else {
        Justification::BoundOnly
    })
}

/// Best known upper bound on the `(ell, m)` rate-distortion function.
///
/// For `rho > 0` this is the plus-channel bound for every `m` (it reduces to
/// the exact rate at `m = 1` and `m = ell`). For `rho < 0` it is the
/// centralized rate when `m >= 2` and the distributed rate when `m = 1`.
pub fn upper_bound_rate(model: &SourceModel, m: usize, d: f64) -> Result<BoundResult> {
    check_distortion(d)?;
    check_subset(model, m, 1)?;
    let justification = justify(model, m, d)?;
    let rho = model.rho();
    let (theta, rate) = if rho == 0.0 {
        (0.0, rate_centralized(model, d)?)
    } else if rho < 0.0 && m == 1 {
        let sol = rate_distributed(model, d)?;
        (sol.theta, sol.rate_nats)
    } else if rho < 0.0 {
        (theta_centralized(model, d)?, rate_centralized(model, d)?)
    } else {
        let theta = theta_plus_bound(model, m, d)?;
        let rate = if theta == 0.0 {
            shannon_lower_bound(model, d)?
        } else {
            rate_from_theta(model, d, theta)
        };
        (theta, rate)
    };
    Ok(BoundResult {
        rate_nats: rate,
        theta,
        exact: justification.is_exact(),
        justification,
        distortion_matrix: ExchangeableMatrix::new(model.ell(), d, theta),
    })
}

/// What is known about `r^(ell,m)(d)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateStatus {
    Exact {
        rate_nats: f64,
        justification: Justification,
    },
    /// Open case: the true rate lies in `[lower, upper]`, with `lower` the
    /// centralized rate and `upper` the plus-channel bound.
    Unknown { lower: f64, upper: f64 },
}

impl RateStatus {
    pub fn exact(&self) -> Option<f64> {
        match self {
            RateStatus::Exact { rate_nats, .. } => Some(*rate_nats),
            RateStatus::Unknown { .. } => None,
        }
    }
}

/// The proven value of the rate-distortion function where one is established.
pub fn rate_exact(model: &SourceModel, m: usize, d: f64) -> Result<RateStatus> {
    let bound = upper_bound_rate(model, m, d)?;
    if bound.exact {
        Ok(RateStatus::Exact {
            rate_nats: bound.rate_nats,
            justification: bound.justification,
        })
    } else {
        Ok(RateStatus::Unknown {
            lower: rate_centralized(model, d)?,
            upper: bound.rate_nats,
        })
    }
}
