mod common;

use common::arb_model;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use symrd::oracle::{densify, log_det_spd};
use symrd::{ExchangeableMatrix, SourceModel};

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn spectrum_matches_dense_eigensolver(model in arb_model(16)) {
        let dense = densify(&model.covariance());
        let reference = sorted(SymmetricEigen::new(dense).eigenvalues.iter().copied().collect());
        let closed = sorted(model.eigenvalues().values());
        for (a, b) in closed.iter().zip(&reference) {
            prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn log_det_matches_cholesky(model in arb_model(16)) {
        let dense = densify(&model.covariance());
        let chol = log_det_spd(&dense).unwrap();
        let closed = model.log_det_covariance();
        prop_assert!((chol - closed).abs() < 1e-9 * closed.abs().max(1.0));
    }

    #[test]
    fn eigenvalues_sum_to_trace(model in arb_model(40)) {
        let spec = model.eigenvalues();
        prop_assert!((spec.trace() - model.ell() as f64).abs() < 1e-12 * model.ell() as f64);
        prop_assert!(spec.is_positive());
    }

    #[test]
    fn exchangeable_matrix_is_permutation_invariant(
        ell in 2usize..10,
        diag in 0.1f64..3.0,
        off in -0.5f64..0.5,
        seed in any::<u64>(),
    ) {
        use rand::{seq::SliceRandom, SeedableRng};
        let a = densify(&ExchangeableMatrix::new(ell, diag, off));
        let mut perm: Vec<usize> = (0..ell).collect();
        perm.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let p = DMatrix::from_fn(ell, ell, |i, j| if perm[i] == j { 1.0 } else { 0.0 });
        prop_assert_eq!(&p * &a * p.transpose(), a);
    }

    #[test]
    fn spectrum_round_trips(ell in 2usize..20, diag in 0.1f64..3.0, off in -0.5f64..0.5) {
        let a = ExchangeableMatrix::new(ell, diag, off);
        let back = a.spectrum().to_matrix();
        prop_assert!((back.diag - diag).abs() < 1e-14);
        prop_assert!((back.off - off).abs() < 1e-14);
    }
}

#[test]
fn rejects_boundary_correlations() {
    for ell in [2, 3, 7] {
        let lower = SourceModel::rho_lower_bound(ell);
        assert!(SourceModel::new(ell, lower).is_err());
        assert!(SourceModel::new(ell, lower + 1e-13).is_err());
        assert!(SourceModel::new(ell, lower + 1e-9).is_ok());
        assert!(SourceModel::new(ell, 1.0).is_err());
        assert!(SourceModel::new(ell, 1.0 - 1e-13).is_err());
    }
    assert!(SourceModel::new(1, 0.5).is_err());
    assert!(SourceModel::new(3, f64::NAN).is_err());
}
