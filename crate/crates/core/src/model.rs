//! Symmetric Gaussian source model and the algebra of exchangeable matrices.
//!
//! An exchangeable matrix has a constant diagonal `a` and a constant
//! off-diagonal `b`. Every covariance and distortion matrix in this crate has
//! that form, so it is stored as the triple `(ell, a, b)` and its spectrum is
//! known in closed form: `a - b` with multiplicity `ell - 1` and `a + (ell - 1) b`
//! once. Dense materialization only happens inside [`crate::oracle`].

use crate::error::{Error, Result};

/// Distance from the edge of the admissible correlation interval below which
/// a model is rejected.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// `ell` zero-mean unit-variance sources with common pairwise correlation `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceModel {
    ell: usize,
    rho: f64,
}

impl SourceModel {
    /// Validates `ell >= 2` and `-1/(ell-1) < rho < 1`, rejecting values within
    /// [`BOUNDARY_TOL`] of either end rather than clamping them.
    pub fn new(ell: usize, rho: f64) -> Result<Self> {
        if ell < 2 {
            return Err(Error::TooFewSources(ell));
        }
        let lower = Self::rho_lower_bound(ell);
        if !rho.is_finite() || rho <= lower + BOUNDARY_TOL || rho >= 1.0 - BOUNDARY_TOL {
            return Err(Error::CorrelationOutOfRange { rho, lower });
        }
        Ok(Self { ell, rho })
    }

    /// `-1/(ell-1)`, the infimum of correlations keeping the covariance positive definite.
    pub fn rho_lower_bound(ell: usize) -> f64 {
        -1.0 / (ell as f64 - 1.0)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `ell` as a float, used throughout the closed forms.
    pub(crate) fn l(&self) -> f64 {
        self.ell as f64
    }

    /// The source covariance: unit diagonal, `rho` off the diagonal.
    pub fn covariance(&self) -> ExchangeableMatrix {
        ExchangeableMatrix {
            ell: self.ell,
            diag: 1.0,
            off: self.rho,
        }
    }

    /// Eigenvalues of the source covariance, `1 - rho` (x `ell-1`) and `1 + (ell-1) rho`.
    pub fn eigenvalues(&self) -> EigenSpectrum {
        self.covariance().spectrum()
    }

    /// `log det` of the source covariance in nats.
    pub fn log_det_covariance(&self) -> f64 {
        let l = self.l();
        (l - 1.0) * (-self.rho).ln_1p() + ((l - 1.0) * self.rho).ln_1p()
    }
}

/// Checks `0 < d < 1`, the only non-trivial distortion range.
pub(crate) fn check_distortion(d: f64) -> Result<()> {
    if d.is_finite() && d > 0.0 && d < 1.0 {
        Ok(())
    } else {
        Err(Error::DistortionOutOfRange(d))
    }
}

/// Free-function form of [`SourceModel::covariance`].
pub fn source_covariance(model: &SourceModel) -> ExchangeableMatrix {
    model.covariance()
}

/// An `ell x ell` matrix with `diag` on the diagonal and `off` everywhere else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeableMatrix {
    pub ell: usize,
    pub diag: f64,
    pub off: f64,
}

impl ExchangeableMatrix {
    pub fn new(ell: usize, diag: f64, off: f64) -> Self {
        Self { ell, diag, off }
    }

    /// `c` times the identity.
    pub fn scaled_identity(ell: usize, c: f64) -> Self {
        Self::new(ell, c, 0.0)
    }

    pub fn spectrum(&self) -> EigenSpectrum {
        EigenSpectrum {
            ell: self.ell,
            bulk: self.diag - self.off,
            apex: self.diag + (self.ell as f64 - 1.0) * self.off,
        }
    }

    pub fn trace(&self) -> f64 {
        self.ell as f64 * self.diag
    }

    pub fn is_positive_definite(&self) -> bool {
        self.spectrum().is_positive()
    }

    /// `(ell-1) log(a-b) + log(a+(ell-1)b)`.
    pub fn log_det(&self) -> Result<f64> {
        self.spectrum().log_det()
    }

    /// Matrix difference, still exchangeable.
    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ell, other.ell);
        Self::new(self.ell, self.diag - other.diag, self.off - other.off)
    }

    /// Entry `(i, j)` of the dense form.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag
        } else {
            self.off
        }
    }
}

/// Spectrum of an exchangeable matrix: `bulk` repeated `ell - 1` times plus `apex`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSpectrum {
    pub ell: usize,
    pub bulk: f64,
    pub apex: f64,
}

impl EigenSpectrum {
    /// All `ell` eigenvalues, bulk modes first.
    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![self.bulk; self.ell.saturating_sub(1)];
        v.push(self.apex);
        v
    }

    pub fn trace(&self) -> f64 {
        (self.ell as f64 - 1.0) * self.bulk + self.apex
    }

    pub fn min(&self) -> f64 {
        if self.ell > 1 {
            self.bulk.min(self.apex)
        } else {
            self.apex
        }
    }

    pub fn is_positive(&self) -> bool {
        self.min() > 0.0
    }

    pub fn log_det(&self) -> Result<f64> {
        if !self.is_positive() {
            return Err(Error::NotPositiveDefinite {
                bulk: self.bulk,
                apex: self.apex,
            });
        }
        Ok((self.ell as f64 - 1.0) * self.bulk.ln() + self.apex.ln())
    }

    /// The exchangeable matrix with this spectrum.
    pub fn to_matrix(&self) -> ExchangeableMatrix {
        let l = self.ell as f64;
        let off = (self.apex - self.bulk) / l;
        ExchangeableMatrix::new(self.ell, self.bulk + off, off)
    }

    /// `sum_i 1/2 log(self_i / other_i)`, the rate of coding a source with
    /// spectrum `self` down to distortion spectrum `other`.
    pub fn half_log_ratio(&self, other: &EigenSpectrum) -> f64 {
        0.5 * ((self.ell as f64 - 1.0) * (self.bulk / other.bulk).ln()
            + (self.apex / other.apex).ln())
    }
}
