mod common;

use common::{arb_distortion, arb_model};
use proptest::prelude::*;
use symrd::centralized::reverse_waterfill;
use symrd::{rate_centralized, rate_distributed, shannon_lower_bound, waterfill};

/// Water level by bisection on `mean(min(level, lambda_i)) = target`.
fn bisect_level(lambdas: &[f64], target: f64) -> f64 {
    let mean = |w: f64| lambdas.iter().map(|&l| w.min(l)).sum::<f64>() / lambdas.len() as f64;
    let (mut lo, mut hi) = (0.0, lambdas.iter().copied().fold(0.0, f64::max));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn allocation_is_feasible(model in arb_model(12), d in arb_distortion()) {
        let w = waterfill(&model, d).unwrap();
        let lambda = model.eigenvalues();
        prop_assert!(w.per_mode.bulk > 0.0 && w.per_mode.bulk <= lambda.bulk);
        prop_assert!(w.per_mode.apex > 0.0 && w.per_mode.apex <= lambda.apex);
        let mean = w.per_mode.trace() / model.ell() as f64;
        prop_assert!((mean - d).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_eigen_sum(model in arb_model(12), d in arb_distortion()) {
        let w = waterfill(&model, d).unwrap();
        let closed = rate_centralized(&model, d).unwrap();
        prop_assert!((w.rate_nats - closed).abs() < 1e-10, "{} vs {}", w.rate_nats, closed);
    }

    #[test]
    fn level_matches_bisection(model in arb_model(12), d in arb_distortion()) {
        let values = model.eigenvalues().values();
        let (alloc, level) = reverse_waterfill(&values, d);
        let reference = bisect_level(&values, d);
        prop_assert!((level.min(values.iter().copied().fold(0.0, f64::max)) - reference).abs() < 1e-10);
        let w = waterfill(&model, d).unwrap();
        prop_assert!((alloc[0] - w.per_mode.bulk).abs() < 1e-12);
        prop_assert!((alloc[alloc.len() - 1] - w.per_mode.apex).abs() < 1e-12);
    }

    #[test]
    fn rate_is_between_bounds(model in arb_model(12), d in arb_distortion()) {
        let r = rate_centralized(&model, d).unwrap();
        prop_assert!(r >= 0.0);
        prop_assert!(r >= shannon_lower_bound(&model, d).unwrap() - 1e-12);
        prop_assert!(r <= rate_distributed(&model, d).unwrap().rate_nats + 1e-12);
    }

    #[test]
    fn rate_decreases_in_distortion(model in arb_model(12), d in 1e-3f64..0.98) {
        let a = rate_centralized(&model, d).unwrap();
        let b = rate_centralized(&model, d + 0.01).unwrap();
        prop_assert!(b < a);
    }
}
