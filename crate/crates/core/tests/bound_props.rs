mod common;

use common::{arb_distortion, arb_model, arb_positive_model};
use proptest::prelude::*;
use symrd::oracle::{build_joint, conditional_covariance, max_entry_error, AuxScheme, OracleConfig};
use symrd::{
    critical_distortion, d_plus_theta_plus, gamma_of_d, rate_centralized, rate_distributed,
    upper_bound_rate, ExchangeableMatrix, Justification, TestChannel,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bound_sits_between_extremes(model in arb_model(10), m in 1usize..=10, d in arb_distortion()) {
        let m = m.min(model.ell());
        let b = upper_bound_rate(&model, m, d).unwrap();
        let lower = rate_centralized(&model, d).unwrap();
        let upper = rate_distributed(&model, d).unwrap().rate_nats;
        let slack = 1e-10 * upper.abs().max(1.0);
        prop_assert!(b.rate_nats >= lower - slack);
        prop_assert!(b.rate_nats <= upper + slack);
    }

    #[test]
    fn bound_non_increasing_in_m(model in arb_model(10), d in arb_distortion()) {
        let rates: Vec<f64> = (1..=model.ell())
            .map(|m| upper_bound_rate(&model, m, d).unwrap().rate_nats)
            .collect();
        for w in rates.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-10 * w[0].abs().max(1.0), "{rates:?}");
        }
    }

    #[test]
    fn gamma_of_d_inverts_channel(model in arb_positive_model(30), m in 1usize..=30, d in arb_distortion()) {
        let m = m.min(model.ell());
        if let Ok(sol) = gamma_of_d(&model, m, d) {
            prop_assert!(sol.gamma_scaled > 0.0);
            prop_assert!((sol.d_check - d).abs() < 1e-10);
            prop_assert_eq!(sol.channel, TestChannel::Plus);
            if sol.gamma().is_finite() {
                let (dd, t) = d_plus_theta_plus(&model, m, sol.gamma()).unwrap();
                prop_assert!((dd - d).abs() < 1e-10);
                prop_assert!((t - sol.theta).abs() < 1e-10);
            }
        } else {
            // only the centralized system lacks a preimage for small d
            prop_assert_eq!(m, model.ell());
        }
    }

    #[test]
    fn exact_below_critical(model in arb_positive_model(20), m in 2usize..=20, u in 0.01f64..0.99) {
        let m = m.min(model.ell());
        let dc = critical_distortion(&model, m).unwrap();
        let d = dc * u;
        let b = upper_bound_rate(&model, m, d).unwrap();
        prop_assert!(b.exact);
        prop_assert_eq!(b.theta, 0.0);
        prop_assert!((b.rate_nats - rate_centralized(&model, d).unwrap()).abs() < 1e-12 * b.rate_nats.max(1.0));
    }

    #[test]
    fn open_case_above_critical(
        (ell, m) in (3usize..20).prop_flat_map(|ell| (Just(ell), 2..ell)),
        rho in 1e-3f64..0.999,
        u in 0.01f64..0.99,
    ) {
        let model = symrd::SourceModel::new(ell, rho).unwrap();
        let dc = critical_distortion(&model, m).unwrap();
        let d = dc + (1.0 - dc) * u;
        let b = upper_bound_rate(&model, m, d).unwrap();
        prop_assert_eq!(b.justification, Justification::BoundOnly);
        prop_assert!(b.theta > 0.0);
        prop_assert!(b.distortion_matrix.is_positive_definite());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn plus_channel_matches_oracle(model in arb_model(5), m in 1usize..=5, g in 0.01f64..50.0) {
        let m = m.min(model.ell());
        let joint = build_joint(&model, &AuxScheme::plus(m, g), &OracleConfig::default()).unwrap();
        let cond = conditional_covariance(&joint).unwrap();
        let (d, t) = d_plus_theta_plus(&model, m, g).unwrap();
        prop_assert!(max_entry_error(&cond, &ExchangeableMatrix::new(model.ell(), d, t)) < 1e-9);
    }
}
