//! Verification suites comparing closed forms against the dense oracle.

use std::fmt;

use crate::centralized::{rate_centralized, shannon_lower_bound};
use crate::distributed::rate_distributed;
use crate::error::{Error, Result};
use crate::generalized::{
    critical_distortion, critical_distortions_pm, d_minus_theta_minus, d_plus_theta_plus,
    gamma_critical, gamma_of_d, upper_bound_rate,
};
use crate::model::{ExchangeableMatrix, SourceModel};
use crate::oracle::{
    berger_tung_rate, build_joint, conditional_covariance, max_entry_error, mmse_weights,
    omega_partition, orthogonality_residual, weight_matrix, Augmentation, AuxScheme,
    JointCovariance, OracleConfig,
};

pub const RHO_GRID: [f64; 10] = [-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9];
pub const GAMMA_GRID: [f64; 3] = [0.1, 1.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Minus-channel conditional covariance against its closed form.
    Prop4,
    /// Plus-channel conditional covariance against its closed form.
    Prop5,
    /// Negative-correlation construction achieves the centralized rate.
    Thm1,
    /// Positive-correlation construction achieves the Shannon lower bound below the critical distortion.
    Thm2,
    /// Orthogonality of the closed-form estimator weights.
    Mmse,
    /// `m = 1` closed form against the plus scheme.
    M1,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Prop4,
        Suite::Prop5,
        Suite::Thm1,
        Suite::Thm2,
        Suite::Mmse,
        Suite::M1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop4 => "prop4",
            Suite::Prop5 => "prop5",
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Mmse => "mmse",
            Suite::M1 => "m1",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Suite::Mmse => 1e-10,
            _ => 1e-9,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// The case with the largest residual.
    pub worst: String,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            cases: 0,
            max_residual: 0.0,
            tolerance: suite.tolerance(),
            worst: String::new(),
        }
    }

    fn record(&mut self, residual: f64, case: impl FnOnce() -> String) {
        self.cases += 1;
        // a NaN sticks so that it fails the suite
        if self.max_residual.is_nan() {
            return;
        }
        if residual.is_nan() || residual > self.max_residual || self.worst.is_empty() {
            self.max_residual = residual;
            self.worst = case();
        }
    }

    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

/// Largest `ell` each suite visits, bounded by the oracle cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyScope {
    pub max_ell: usize,
    pub oracle: OracleConfig,
}

impl Default for VerifyScope {
    fn default() -> Self {
        Self {
            max_ell: 8,
            oracle: OracleConfig::default(),
        }
    }
}

pub fn run_suite(suite: Suite, scope: &VerifyScope) -> Result<SuiteReport> {
    if scope.max_ell > scope.oracle.max_ell {
        return Err(Error::OracleCap {
            ell: scope.max_ell,
            cap: scope.oracle.max_ell,
        });
    }
    if scope.max_ell < 2 {
        return Err(Error::TooFewSources(scope.max_ell));
    }
    match suite {
        Suite::Prop4 => prop4(scope),
        Suite::Prop5 => prop5(scope),
        Suite::Thm1 => thm1(scope),
        Suite::Thm2 => thm2(scope),
        Suite::Mmse => mmse(scope),
        Suite::M1 => m1(scope),
    }
}

fn models(ells: impl IntoIterator<Item = usize>, rhos: &[f64]) -> Vec<SourceModel> {
    ells.into_iter()
        .flat_map(|ell| rhos.iter().filter_map(move |&rho| SourceModel::new(ell, rho).ok()))
        .collect()
}

fn conditional(model: &SourceModel, scheme: &AuxScheme, scope: &VerifyScope) -> Result<(JointCovariance, nalgebra::DMatrix<f64>)> {
    let joint = build_joint(model, scheme, &scope.oracle)?;
    let cond = conditional_covariance(&joint)?;
    Ok((joint, cond))
}

fn prop4(scope: &VerifyScope) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Prop4);
    for model in models(2..=scope.max_ell, &RHO_GRID) {
        for m in 2..=model.ell() {
            for g in GAMMA_GRID {
                let (_, cond) = conditional(&model, &AuxScheme::minus(m, g), scope)?;
                let (d, t) = d_minus_theta_minus(&model, m, g)?;
                let err = max_entry_error(&cond, &ExchangeableMatrix::new(model.ell(), d, t));
                report.record(err, || case(&model, m, &format!("gamma={g}")));
            }
        }
    }
    Ok(report)
}

fn prop5(scope: &VerifyScope) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Prop5);
    for model in models(2..=scope.max_ell, &RHO_GRID) {
        for m in 1..=model.ell() {
            for g in GAMMA_GRID {
                let (_, cond) = conditional(&model, &AuxScheme::plus(m, g), scope)?;
                let (d, t) = d_plus_theta_plus(&model, m, g)?;
                let err = max_entry_error(&cond, &ExchangeableMatrix::new(model.ell(), d, t));
                report.record(err, || case(&model, m, &format!("gamma={g}")));
            }
        }
    }
    Ok(report)
}

fn case(model: &SourceModel, m: usize, rest: &str) -> String {
    format!("ell={} m={m} rho={} {rest}", model.ell(), model.rho())
}

fn thm_ells(scope: &VerifyScope) -> std::ops::RangeInclusive<usize> {
    3..=scope.max_ell.min(6)
}

/// Centralized rate through the minus construction, with refinement
/// channels below `d_c^-`, over a grid crossing `d_c^-`.
fn thm1(scope: &VerifyScope) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Thm1);
    for model in models(thm_ells(scope), &[-0.05, -0.2, -0.4]) {
        let ell = model.ell();
        let (minus_crit, _) = critical_distortions_pm(&model);
        let mut grid: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
        grid.push(minus_crit);
        for m in 2..=ell {
            for &d in &grid {
                let scheme = if d < minus_crit {
                    let aug = Augmentation::new(d, minus_crit, omega_partition(ell, m))?;
                    AuxScheme::minus(m, gamma_critical(&model, m)?).with_augmentation(aug)
                } else {
                    AuxScheme::minus(m, gamma_of_d(&model, m, d)?.gamma())
                };
                let (joint, _) = conditional(&model, &scheme, scope)?;
                let err = (berger_tung_rate(&model, &joint)? - rate_centralized(&model, d)?).abs();
                report.record(err, || case(&model, m, &format!("d={d}")));
            }
        }
    }
    Ok(report)
}

/// At the critical noise variance the plus scheme leaves a diagonal
/// distortion `d_c^(ell,m)`; refinement channels then reach any smaller
/// `d` at the Shannon lower bound. Above `d_c^(ell,m)` the scheme at
/// `gamma_of_d` attains [`upper_bound_rate`].
fn thm2(scope: &VerifyScope) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Thm2);
    let rhos: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    for model in models(thm_ells(scope), &rhos) {
        let ell = model.ell();
        for m in 2..=ell {
            let gc = gamma_critical(&model, m)?;
            let dc = critical_distortion(&model, m)?;
            let (d, t) = d_plus_theta_plus(&model, m, gc)?;
            report.record(t.abs(), || case(&model, m, "theta_plus(gamma_c)"));
            report.record((d - dc).abs(), || case(&model, m, "d_plus(gamma_c) - d_c"));

            let (joint, cond) = conditional(&model, &AuxScheme::plus(m, gc), scope)?;
            let err = (berger_tung_rate(&model, &joint)? - shannon_lower_bound(&model, dc)?).abs();
            report.record(err, || case(&model, m, "rate at gamma_c"));
            let base_precision = cond.clone().try_inverse().ok_or(Error::SingularConditional)?;

            for frac in [0.25, 0.5, 0.75] {
                let d = dc * frac;
                let aug = Augmentation::new(d, dc, omega_partition(ell, m))?;
                let refine = 1.0 / aug.noise_variance();
                let scheme = AuxScheme::plus(m, gc).with_augmentation(aug);
                let (joint, cond) = conditional(&model, &scheme, scope)?;
                let label = || case(&model, m, &format!("augmented d={d}"));
                report.record(max_entry_error(&cond, &ExchangeableMatrix::scaled_identity(ell, d)), label);
                let err = (berger_tung_rate(&model, &joint)? - shannon_lower_bound(&model, d)?).abs();
                report.record(err, label);
                // each source gains exactly one refinement channel's precision
                let precision = cond.try_inverse().ok_or(Error::SingularConditional)?;
                let mut expected = base_precision.clone();
                for i in 0..ell {
                    expected[(i, i)] += refine;
                }
                // relative tolerance 1e-8, rescaled onto the suite's 1e-9
                let scale = expected.amax().max(1.0);
                report.record((precision - expected).amax() / scale * 0.1, label);
            }

            for frac in [0.25, 0.5, 0.75] {
                let d = dc + (1.0 - dc) * frac;
                let gamma = gamma_of_d(&model, m, d)?.gamma();
                let (joint, _) = conditional(&model, &AuxScheme::plus(m, gamma), scope)?;
                let err = (berger_tung_rate(&model, &joint)? - upper_bound_rate(&model, m, d)?.rate_nats).abs();
                report.record(err, || case(&model, m, &format!("bound d={d}")));
            }
        }
    }
    Ok(report)
}

fn mmse(scope: &VerifyScope) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Mmse);
    for model in models(2..=scope.max_ell, &RHO_GRID) {
        for m in 1..=model.ell() {
            for g in GAMMA_GRID {
                let mut schemes = vec![AuxScheme::plus(m, g)];
                if m >= 2 {
                    schemes.push(AuxScheme::minus(m, g));
                }
                for scheme in schemes {
                    let joint = build_joint(&model, &scheme, &scope.oracle)?;
                    let w = weight_matrix(&joint, &mmse_weights(&model, &scheme)?)?;
                    let err = orthogonality_residual(&joint, &w);
                    report.record(err, || {
                        case(&model, m, &format!("{:?} gamma={g}", scheme.channel))
                    });
                }
            }
        }
    }
    Ok(report)
}

fn m1(scope: &VerifyScope) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::M1);
    for model in models(2..=scope.max_ell.min(6), &RHO_GRID) {
        for i in 1..=50 {
            let d = i as f64 / 51.0;
            let sol = rate_distributed(&model, d)?;
            let (joint, _) = conditional(&model, &AuxScheme::plus(1, sol.gamma), scope)?;
            let bt = berger_tung_rate(&model, &joint)?;
            let bound = upper_bound_rate(&model, 1, d)?.rate_nats;
            let err = (bt - sol.rate_nats).abs().max((bound - sol.rate_nats).abs());
            report.record(err, || case(&model, 1, &format!("d={d}")));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::from_name("nope"), None);
    }

    #[test]
    fn scope_above_cap_is_refused() {
        let scope = VerifyScope {
            max_ell: 20,
            ..VerifyScope::default()
        };
        assert!(matches!(run_suite(Suite::Prop4, &scope), Err(Error::OracleCap { ell: 20, cap: 8 })));
    }

    #[test]
    fn small_scope_suites_pass() {
        let scope = VerifyScope {
            max_ell: 4,
            ..VerifyScope::default()
        };
        for suite in Suite::ALL {
            let report = run_suite(suite, &scope).unwrap();
            assert!(report.cases > 0);
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn nan_residual_fails() {
        let mut r = SuiteReport::new(Suite::Prop4);
        r.record(1e-12, || "a".into());
        r.record(f64::NAN, || "b".into());
        r.record(1e-3, || "c".into());
        assert!(!r.passed());
        assert_eq!(r.worst, "b");
    }
}
