//! Command-line front end for `symrd`: figure data as tidy CSV or JSON, and
//! the oracle verification suites.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::io::Write;
use std::path::Path;

use args::{Cli, Command};
use config::{Resolved, VerifyRequest, DEFAULT_GAP_M};
use error::{CliError, CliResult};
use table::{Format, Table};

/// Writes `table` to `out` through a temporary file in the same directory and
/// an atomic rename, so a failed run never leaves a partial file behind.
pub fn write_atomic(table: &Table, format: Format, out: &Path) -> CliResult<()> {
    let dir = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    table.write(format, &mut tmp)?;
    tmp.as_file().sync_all()?;
    tmp.persist(out).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

fn emit(table: &Table, req: &Resolved, stdout: &mut dyn Write) -> CliResult<()> {
    match &req.out {
        Some(path) => write_atomic(table, req.format, path),
        None => {
            table.write(req.format, &mut *stdout)?;
            Ok(())
        }
    }
}

/// Runs one parsed invocation, writing tables and reports to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::RdCurve(a) => {
            let req = Resolved::from_args(&a.common, Some(&a.grid), None)?;
            let model = req.model()?;
            let ms = req.subset_sizes(model.ell())?;
            let table = commands::rd_curve(&model, &ms, &req.grid.points())?;
            emit(&table, &req, stdout)
        }
        Command::GapCurve(a) => {
            let req = Resolved::from_args(&a.common, Some(&a.grid), None)?;
            let ms = if req.ms.is_empty() {
                DEFAULT_GAP_M.to_vec()
            } else {
                req.ms.clone()
            };
            let table = commands::gap_curve(req.require_rho()?, &ms, &req.grid.points())?;
            emit(&table, &req, stdout)
        }
        Command::Spectrum(a) => {
            let req = Resolved::from_args(&a.common, None, a.d)?;
            let model = req.model()?;
            let ms = req.subset_sizes(model.ell())?;
            let d = req.d.ok_or_else(|| CliError::Usage("--d is required".into()))?;
            let table = commands::spectrum(&model, &ms, d)?;
            emit(&table, &req, stdout)
        }
        Command::Critical(a) => {
            let req = Resolved::from_args(a, None, None)?;
            let model = req.model()?;
            let ms = req.subset_sizes(model.ell())?;
            let table = commands::critical(&model, &ms)?;
            emit(&table, &req, stdout)
        }
        Command::Verify(a) => {
            let req = VerifyRequest::from_args(a)?;
            let reports = commands::verify(&req)?;
            for r in &reports {
                writeln!(stdout, "{}", commands::report_line(r))?;
            }
            let failed: Vec<String> = reports
                .iter()
                .filter(|r| !r.passed())
                .map(|r| format!("{} at {}", r.suite.name(), r.worst))
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::VerificationFailed(failed.join("; ")))
            }
        }
    }
}
