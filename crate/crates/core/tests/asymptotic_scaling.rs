use symrd::asymptotics::{
    dcm_limit, delta_gap, expansion_rate, per_encoder_limit, Regime,
};
use symrd::{rate_centralized, upper_bound_rate, SourceModel};

const ELLS: [usize; 3] = [100, 1_000, 10_000];

fn exact_bound(ell: usize, m: usize, rho: f64, d: f64) -> f64 {
    upper_bound_rate(&SourceModel::new(ell, rho).unwrap(), m, d)
        .unwrap()
        .rate_nats
}

/// `|exact - truncated| * ell` (or `* sqrt(ell)` at `d_c^+`) at each `ell`.
fn scaled_residuals(m: usize, rho: f64, d: f64) -> (Regime, Vec<f64>) {
    let mut regime = Regime::BelowDcm;
    let scaled = ELLS
        .iter()
        .map(|&ell| {
            let v = expansion_rate(ell, m, rho, d).unwrap();
            regime = v.regime;
            let scale = if v.regime == Regime::AtCritical {
                (ell as f64).sqrt()
            } else {
                ell as f64
            };
            (exact_bound(ell, m, rho, d) - v.value_nats).abs() * scale
        })
        .collect();
    (regime, scaled)
}

fn probe_points(m: usize, rho: f64) -> Vec<f64> {
    let dcm = dcm_limit(m, rho);
    let plus = 1.0 - rho;
    let mut pts = Vec::new();
    if m > 1 {
        pts.push(0.5 * dcm);
    }
    pts.extend([0.5 * (dcm + plus), plus, 0.5 * (1.0 + plus)]);
    pts
}

#[test]
fn residuals_scale_with_dropped_order() {
    for rho in [0.3, 0.6] {
        for m in [1, 2, 3] {
            for d in probe_points(m, rho) {
                let (regime, r) = scaled_residuals(m, rho, d);
                for w in r.windows(2) {
                    let ratio = w[1] / w[0];
                    assert!(
                        (0.3..=3.0).contains(&ratio),
                        "rho={rho} m={m} d={d} {regime:?}: {r:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn gap_converges_to_delta() {
    for rho in [0.3, 0.6] {
        for m in [1, 2, 3, 4] {
            for d in probe_points(m, rho) {
                let delta = delta_gap(m, rho, d).unwrap();
                if delta.is_infinite() {
                    continue;
                }
                let mut prev_err = f64::INFINITY;
                for ell in ELLS {
                    let model = SourceModel::new(ell, rho).unwrap();
                    let gap = exact_bound(ell, m, rho, d) - rate_centralized(&model, d).unwrap();
                    let err = (gap - delta).abs();
                    assert!(err <= prev_err + 1e-9, "rho={rho} m={m} d={d} ell={ell}");
                    prev_err = err;
                }
                assert!(prev_err < 0.01, "rho={rho} m={m} d={d}: {prev_err}");
            }
        }
    }
}

#[test]
fn delta_non_increasing_in_m_and_vanishing() {
    for rho in [0.3, 0.6] {
        for i in 1..40 {
            let d = i as f64 / 40.0;
            if (d - (1.0 - rho)).abs() < 1e-12 {
                continue;
            }
            let values: Vec<f64> = (1..=60).map(|m| delta_gap(m, rho, d).unwrap()).collect();
            for w in values.windows(2) {
                assert!(w[1] <= w[0] + 1e-15, "rho={rho} d={d}");
            }
            assert!(values.iter().all(|v| *v >= 0.0));
            assert!(delta_gap(10_000, rho, d).unwrap() < 1e-2, "rho={rho} d={d}");
        }
    }
}

#[test]
fn per_encoder_rate_converges() {
    let ell = 10_000;
    for (m, d) in [(2, 0.2), (3, 0.1), (1, 0.7)] {
        let rbar = exact_bound(ell, m, 0.6, d) / ell as f64;
        assert!((rbar - per_encoder_limit(m, 0.6, d).unwrap()).abs() < 1e-3);
    }
}
