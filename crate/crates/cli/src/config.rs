//! Config files and request resolution.
//!
//! A config file is flat TOML: one `key = value` per line, keys spelled like
//! the long flags without dashes in front. Flags win over the file, the file
//! wins over built-in defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use symrd::SourceModel;

use crate::args::{CommonArgs, GridArgs, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::table::Format;

pub const DEFAULT_D_MIN: f64 = 0.01;
pub const DEFAULT_D_MAX: f64 = 0.99;
pub const DEFAULT_D_COUNT: usize = 99;
pub const DEFAULT_GAP_M: [usize; 3] = [1, 2, 3];

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub ell: Option<usize>,
    pub m: Option<Vec<usize>>,
    pub rho: Option<f64>,
    pub d_min: Option<f64>,
    pub d_max: Option<f64>,
    pub d_count: Option<usize>,
    pub d_log: Option<bool>,
    pub d: Option<f64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub suite: Option<Vec<String>>,
    pub oracle_cap: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str, path: &Path) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::ConfigParse {
            path: path.to_path_buf(),
            source: Box::new(e),
        })
    }

    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }
}

/// Distortion grid strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl DGrid {
    pub fn new(min: f64, max: f64, count: usize, log: bool) -> CliResult<Self> {
        if !(min > 0.0 && min < max && max < 1.0) {
            return Err(CliError::Usage(format!(
                "distortion grid [{min}, {max}] must satisfy 0 < d-min < d-max < 1"
            )));
        }
        if count < 2 {
            return Err(CliError::Usage(format!("d-count must be at least 2, got {count}")));
        }
        Ok(Self { min, max, count, log })
    }

    /// Grid points; the endpoints are exactly `min` and `max`.
    pub fn points(&self) -> Vec<f64> {
        let last = self.count - 1;
        let (a, b) = if self.log {
            (self.min.ln(), self.max.ln())
        } else {
            (self.min, self.max)
        };
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == last {
                    return self.max;
                }
                let t = a + (b - a) * i as f64 / last as f64;
                let d = if self.log { t.exp() } else { t };
                d.clamp(self.min, self.max)
            })
            .collect()
    }
}

/// Everything a curve command needs, after merging flags, file, and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub ell: Option<usize>,
    pub ms: Vec<usize>,
    pub rho: Option<f64>,
    pub grid: DGrid,
    pub d: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Resolved {
    pub fn from_args(common: &CommonArgs, grid: Option<&GridArgs>, d: Option<f64>) -> CliResult<Self> {
        let file = FileConfig::load(common.config.as_deref())?;
        let empty = GridArgs::default();
        let g = grid.unwrap_or(&empty);
        let ms = if common.m.is_empty() {
            file.m.clone().unwrap_or_default()
        } else {
            common.m.clone()
        };
        let format = match common.format.as_ref().or(file.format.as_ref()) {
            Some(s) => s.parse()?,
            None => Format::Csv,
        };
        Ok(Self {
            ell: common.ell.or(file.ell),
            ms,
            rho: common.rho.or(file.rho),
            grid: DGrid::new(
                g.d_min.or(file.d_min).unwrap_or(DEFAULT_D_MIN),
                g.d_max.or(file.d_max).unwrap_or(DEFAULT_D_MAX),
                g.d_count.or(file.d_count).unwrap_or(DEFAULT_D_COUNT),
                g.d_log || file.d_log.unwrap_or(false),
            )?,
            d: d.or(file.d),
            out: common.out.clone().or(file.out),
            format,
        })
    }

    pub fn require_ell(&self) -> CliResult<usize> {
        self.ell.ok_or_else(|| CliError::Usage("--ell is required".into()))
    }

    pub fn require_rho(&self) -> CliResult<f64> {
        self.rho.ok_or_else(|| CliError::Usage("--rho is required".into()))
    }

    pub fn model(&self) -> CliResult<SourceModel> {
        SourceModel::new(self.require_ell()?, self.require_rho()?).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Requested subset sizes, defaulting to `1..=ell`, each checked against `ell`.
    pub fn subset_sizes(&self, ell: usize) -> CliResult<Vec<usize>> {
        let ms = if self.ms.is_empty() {
            (1..=ell).collect()
        } else {
            self.ms.clone()
        };
        if let Some(&bad) = ms.iter().find(|&&m| m == 0 || m > ell) {
            return Err(CliError::Usage(format!("subset size {bad} is outside 1..={ell}")));
        }
        Ok(ms)
    }
}

/// Suites and scope for `verify`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRequest {
    pub suites: Vec<symrd::verify::Suite>,
    pub scope: symrd::verify::VerifyScope,
}

impl VerifyRequest {
    pub fn from_args(args: &VerifyArgs) -> CliResult<Self> {
        use symrd::verify::{Suite, VerifyScope};
        let file = FileConfig::load(args.config.as_deref())?;
        let names = if args.suite.is_empty() {
            file.suite.unwrap_or_default()
        } else {
            args.suite.clone()
        };
        let suites = if names.is_empty() {
            Suite::ALL.to_vec()
        } else {
            names
                .iter()
                .map(|n| {
                    Suite::from_name(n).ok_or_else(|| CliError::Usage(format!("unknown suite {n:?}")))
                })
                .collect::<CliResult<_>>()?
        };
        let mut scope = VerifyScope::default();
        if let Some(cap) = args.oracle_cap.or(file.oracle_cap) {
            scope.oracle.max_ell = cap;
        }
        scope.max_ell = args.ell.or(file.ell).unwrap_or(scope.oracle.max_ell);
        if scope.max_ell > scope.oracle.max_ell {
            return Err(CliError::Numeric(symrd::Error::OracleCap {
                ell: scope.max_ell,
                cap: scope.oracle.max_ell,
            }));
        }
        if scope.max_ell < 2 {
            return Err(CliError::Usage("--ell must be at least 2".into()));
        }
        Ok(Self { suites, scope })
    }
}
