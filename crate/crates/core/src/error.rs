use thiserror::Error;

/// Errors raised by the rate-distortion routines and the conditioning oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("number of sources must be at least 2, got {0}")]
    TooFewSources(usize),

    #[error("correlation {rho} outside the open interval ({lower}, 1)")]
    CorrelationOutOfRange { rho: f64, lower: f64 },

    #[error("distortion {0} outside the open interval (0, 1)")]
    DistortionOutOfRange(f64),

    #[error("distortion {d} outside the admissible interval ({lower}, {upper})")]
    DistortionNotAdmissible { d: f64, lower: f64, upper: f64 },

    #[error("subset size {m} invalid for {ell} sources (need {min} <= m <= {ell})")]
    SubsetSize { ell: usize, m: usize, min: usize },

    #[error("noise variance must be positive and finite, got {0}")]
    NoiseVariance(f64),

    #[error("{0} requires a positive correlation coefficient")]
    NeedsPositiveCorrelation(&'static str),

    #[error("{0} is undefined for independent sources")]
    IndependentSources(&'static str),

    #[error("matrix is not positive definite (eigenvalues {bulk}, {apex})")]
    NotPositiveDefinite { bulk: f64, apex: f64 },

    #[error("oracle dimension cap exceeded: {ell} sources > cap {cap}")]
    OracleCap { ell: usize, cap: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("auxiliary covariance block is singular in a direction the sources load on (residual {0:e})")]
    SingularAuxiliary(f64),

    #[error("conditional covariance is singular")]
    SingularConditional,

    #[error("scheme mismatch: {0}")]
    SchemeMismatch(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
