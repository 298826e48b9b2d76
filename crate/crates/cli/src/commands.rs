//! Table builders for each subcommand.

use rayon::prelude::*;
use symrd::asymptotics::{dcm_limit, delta_gap, regime_of, REGIME_TOL};
use symrd::verify::{run_suite, SuiteReport};
use symrd::{
    critical_distortion, critical_distortions_pm, rate_centralized, rate_distributed,
    shannon_lower_bound, upper_bound_rate, SourceModel,
};

use crate::config::VerifyRequest;
use crate::error::{CliError, CliResult};
use crate::table::{Cell, Table};

/// Per-mode distortions within this relative distance of the eigenvalue are uncoded.
pub const UNCODED_RTOL: f64 = 1e-12;

fn model_params(model: &SourceModel) -> Vec<(&'static str, Cell)> {
    vec![("ell", Cell::Int(model.ell())), ("rho", Cell::Real(model.rho()))]
}

fn ms_param(ms: &[usize]) -> Cell {
    Cell::text(ms.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
}

/// The bound for every requested `m`, followed by the centralized, distributed,
/// and Shannon-lower-bound references, each over the whole grid.
pub fn rd_curve(model: &SourceModel, ms: &[usize], points: &[f64]) -> CliResult<Table> {
    let ell = model.ell();
    let floor = model.eigenvalues().min();
    let mut rows = Vec::new();
    for &m in ms {
        let series: Vec<Vec<Cell>> = points
            .par_iter()
            .map(|&d| {
                let b = upper_bound_rate(model, m, d)?;
                Ok(vec![
                    Cell::text("generalized"),
                    Cell::Int(m),
                    Cell::Real(d),
                    Cell::Real(b.rate_nats),
                    Cell::Bool(b.exact),
                    Cell::text(b.justification.label()),
                ])
            })
            .collect::<symrd::Result<_>>()?;
        rows.extend(series);
    }
    let refs: Vec<[Vec<Cell>; 3]> = points
        .par_iter()
        .map(|&d| {
            let coded = d <= floor;
            Ok([
                vec![
                    Cell::text("centralized"),
                    Cell::Int(ell),
                    Cell::Real(d),
                    Cell::Real(rate_centralized(model, d)?),
                    Cell::Bool(true),
                    Cell::text(if coded { "all-modes-coded" } else { "mode-uncoded" }),
                ],
                vec![
                    Cell::text("distributed"),
                    Cell::Int(1),
                    Cell::Real(d),
                    Cell::Real(rate_distributed(model, d)?.rate_nats),
                    Cell::Bool(true),
                    Cell::text("distributed"),
                ],
                vec![
                    Cell::text("shannon-lower-bound"),
                    Cell::Empty,
                    Cell::Real(d),
                    Cell::Real(shannon_lower_bound(model, d)?),
                    Cell::Bool(coded),
                    Cell::text("lower-bound"),
                ],
            ])
        })
        .collect::<symrd::Result<_>>()?;
    for k in 0..3 {
        rows.extend(refs.iter().map(|r| r[k].clone()));
    }
    let mut parameters = model_params(model);
    parameters.push(("m", ms_param(ms)));
    Ok(Table {
        command: "rd-curve",
        parameters,
        columns: vec!["series", "m", "d", "rate_nats", "exact", "branch"],
        rows,
    })
}

/// The grid with `1 - rho` added when it falls inside, so the blow-up is sampled.
pub fn gap_points(rho: f64, points: &[f64]) -> Vec<f64> {
    let plus = 1.0 - rho;
    let mut out = points.to_vec();
    let (lo, hi) = (points[0], points[points.len() - 1]);
    if plus >= lo && plus <= hi && !out.iter().any(|&d| (d - plus).abs() <= REGIME_TOL) {
        let at = out.partition_point(|&d| d < plus);
        out.insert(at, plus);
    }
    out
}

pub fn gap_curve(rho: f64, ms: &[usize], points: &[f64]) -> CliResult<Table> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(CliError::Usage(format!("gap-curve needs 0 < rho < 1, got {rho}")));
    }
    if let Some(&bad) = ms.iter().find(|&&m| m == 0) {
        return Err(CliError::Usage(format!("subset size {bad} must be positive")));
    }
    let grid = gap_points(rho, points);
    let mut rows = Vec::new();
    for &m in ms {
        let series: Vec<Vec<Cell>> = grid
            .par_iter()
            .map(|&d| {
                let delta = delta_gap(m, rho, d)?;
                let regime = regime_of(m, rho, d);
                Ok(vec![
                    Cell::Int(m),
                    Cell::Real(d),
                    if delta.is_finite() { Cell::Real(delta) } else { Cell::Empty },
                    Cell::Bool(delta.is_infinite()),
                    Cell::text(regime.label()),
                ])
            })
            .collect::<symrd::Result<_>>()?;
        rows.extend(series);
    }
    Ok(Table {
        command: "gap-curve",
        parameters: vec![("rho", Cell::Real(rho)), ("m", ms_param(ms))],
        columns: vec!["m", "d", "delta_nats", "diverges", "regime"],
        rows,
    })
}

/// Source eigenvalues against the per-mode distortions of each system at `d`,
/// repeated modes listed first.
pub fn spectrum(model: &SourceModel, ms: &[usize], d: f64) -> CliResult<Table> {
    if !(d > 0.0 && d < 1.0) {
        return Err(CliError::Usage(format!("--d must lie in (0, 1), got {d}")));
    }
    let lambda = model.eigenvalues().values();
    let mut rows = Vec::new();
    for &m in ms {
        let bound = upper_bound_rate(model, m, d)?;
        let dist = bound.distortion_matrix.spectrum().values();
        for (i, (&lam, &di)) in lambda.iter().zip(&dist).enumerate() {
            rows.push(vec![
                Cell::Int(m),
                Cell::Int(i + 1),
                Cell::Real(lam),
                Cell::Real(di),
                Cell::Bool((di - lam).abs() <= UNCODED_RTOL * lam.max(1.0)),
            ]);
        }
    }
    let mut parameters = model_params(model);
    parameters.push(("d", Cell::Real(d)));
    parameters.push(("m", ms_param(ms)));
    Ok(Table {
        command: "spectrum",
        parameters,
        columns: vec!["m", "mode", "lambda", "distortion", "uncoded"],
        rows,
    })
}

/// `d_c^-`, `d_c^+`, and per `m` the critical distortion, its large-`ell`
/// limit, and the critical noise variance, where defined.
pub fn critical(model: &SourceModel, ms: &[usize]) -> CliResult<Table> {
    let rho = model.rho();
    let (minus, plus) = critical_distortions_pm(model);
    let mut rows = vec![
        vec![Cell::text("d_c_minus"), Cell::Empty, Cell::Real(minus)],
        vec![Cell::text("d_c_plus"), Cell::Empty, Cell::Real(plus)],
    ];
    for &m in ms {
        if rho > 0.0 {
            rows.push(vec![Cell::text("d_c"), Cell::Int(m), Cell::Real(critical_distortion(model, m)?)]);
            rows.push(vec![Cell::text("d_c_limit"), Cell::Int(m), Cell::Real(dcm_limit(m, rho))]);
        }
        if rho != 0.0 && m >= 2 {
            rows.push(vec![
                Cell::text("gamma_c"),
                Cell::Int(m),
                Cell::Real(symrd::generalized::gamma_critical(model, m)?),
            ]);
        }
    }
    let mut parameters = model_params(model);
    parameters.push(("m", ms_param(ms)));
    Ok(Table {
        command: "critical",
        parameters,
        columns: vec!["quantity", "m", "value"],
        rows,
    })
}

/// Runs the requested suites in parallel, reports in request order.
pub fn verify(req: &VerifyRequest) -> CliResult<Vec<SuiteReport>> {
    req.suites
        .par_iter()
        .map(|&s| run_suite(s, &req.scope).map_err(CliError::from))
        .collect()
}

pub fn report_line(r: &SuiteReport) -> String {
    format!(
        "{:<6} {} cases={} max_residual={:.3e} tolerance={:.0e} worst: {}",
        r.suite.name(),
        if r.passed() { "PASS" } else { "FAIL" },
        r.cases,
        r.max_residual,
        r.tolerance,
        r.worst
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(ell: usize, rho: f64) -> SourceModel {
        SourceModel::new(ell, rho).unwrap()
    }

    #[test]
    fn rd_curve_layout() {
        let t = rd_curve(&model(3, 0.6), &[1, 2, 3], &[0.2, 0.5]).unwrap();
        assert_eq!(t.rows.len(), 3 * 2 + 3 * 2);
        assert_eq!(t.rows[2][1], Cell::Int(2));
        assert_eq!(t.rows[2][5], Cell::text("below-critical-distortion"));
        assert_eq!(t.rows[3][5], Cell::text("bound-only"));
        assert_eq!(t.rows[6][0], Cell::text("centralized"));
        assert_eq!(t.rows[11][0], Cell::text("shannon-lower-bound"));
    }

    #[test]
    fn gap_grid_gains_critical_point() {
        let p = gap_points(0.3, &[0.1, 0.5, 0.9]);
        assert_eq!(p, vec![0.1, 0.5, 1.0 - 0.3, 0.9]);
        assert_eq!(gap_points(0.3, &[0.1, 0.5]), vec![0.1, 0.5]);
        let t = gap_curve(0.3, &[2], &[0.1, 0.5, 0.9]).unwrap();
        assert_eq!(t.rows[2][2], Cell::Empty);
        assert_eq!(t.rows[2][3], Cell::Bool(true));
        assert!(gap_curve(-0.3, &[2], &[0.1, 0.5]).is_err());
    }

    #[test]
    fn spectrum_marks_uncoded_modes() {
        let t = spectrum(&model(3, 0.6), &[3], 0.5).unwrap();
        let flags: Vec<&Cell> = t.rows.iter().map(|r| &r[4]).collect();
        assert_eq!(flags, vec![&Cell::Bool(true), &Cell::Bool(true), &Cell::Bool(false)]);
    }

    #[test]
    fn critical_rows() {
        let t = critical(&model(4, 0.3), &[2, 3]).unwrap();
        let find = |q: &str, m: usize| {
            t.rows
                .iter()
                .find(|r| r[0] == Cell::text(q) && r[1] == Cell::Int(m))
                .map(|r| r[2].clone())
        };
        assert_eq!(find("d_c", 2), Some(Cell::Real(critical_distortion(&model(4, 0.3), 2).unwrap())));
        assert!(find("gamma_c", 3).is_some());
        let t = critical(&model(4, -0.2), &[1, 2]).unwrap();
        assert_eq!(t.rows.len(), 3);
    }
}
