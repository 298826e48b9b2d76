//! # symrd
//!
//! Rate-distortion functions of generalized multiterminal source coding for
//! `ell` symmetrically correlated, zero-mean, unit-variance Gaussian sources.
//! Every size-`m` subset of sources has its own encoder; a joint decoder must
//! reconstruct all sources within mean squared error `d` per component.
//!
//! All rates are in nats.
//!
//! - [`model`]: the source model and exchangeable-matrix algebra.
//! - [`centralized`]: the `m = ell` rate via closed form and reverse water-filling.
//! - [`distributed`]: the `m = 1` rate.
//! - [`generalized`]: critical distortions, test-channel distortions, the
//!   Berger-Tung upper bound, and exact-rate dispatch for general `m`.
//! - [`oracle`]: dense Gaussian conditioning that checks every closed form.
//! - [`asymptotics`]: large-`ell` expansions and the limiting rate gap.
//! - [`verify`]: the verification suites driven by the command line tool.

#![forbid(unsafe_code)]

pub mod asymptotics;
pub mod centralized;
pub mod distributed;
pub mod error;
pub mod generalized;
pub mod model;
pub mod oracle;
pub mod verify;

pub use centralized::{
    distortion_matrix_centralized, rate_centralized, shannon_lower_bound, waterfill,
    WaterfillSolution,
};
pub use distributed::{rate_distributed, DistributedSolution};
pub use error::{Error, Result};
pub use generalized::{
    critical_distortion, critical_distortions_pm, d_minus_theta_minus, d_plus_theta_plus,
    eta_coefficients, gamma_of_d, rate_exact, upper_bound_rate, BoundResult, EtaCoefficients,
    GammaSolution, Justification, RateStatus, TestChannel,
};
pub use model::{EigenSpectrum, ExchangeableMatrix, SourceModel};
