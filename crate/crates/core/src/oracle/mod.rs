//! Exact Gaussian conditioning for the test-channel constructions.
//!
//! The oracle assembles the dense joint covariance of the sources and every
//! auxiliary observation of a scheme, then conditions by Schur complement.
//! It knows nothing about the closed forms in [`crate::generalized`]; matching
//! them entrywise is the point.
//!
//! Each auxiliary variable is `h . X + noise`, so the joint covariance is
//! `[[S, S H^T], [H S, H S H^T + R]]` with `R` block diagonal. The minus
//! channel's noise covariance `gamma M` is singular (rows of `M` sum to zero),
//! which makes the auxiliary block singular as well; conditioning therefore
//! uses a symmetric-eigenvalue pseudo-inverse and then checks that the sources
//! load only on its range.

mod mmse;
mod omega;

pub use mmse::{
    estimator_error_covariance, mmse_weights, orthogonality_residual, weight_matrix, MmseWeights,
};
pub use omega::{omega_partition, subsets, OmegaAssignment};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::generalized::TestChannel;
use crate::model::{ExchangeableMatrix, SourceModel};

/// Relative eigenvalue cutoff of the pseudo-inverse.
pub const PINV_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest number of sources the oracle will densify.
    pub max_ell: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        // worst case C(8,4) * 4 = 280 auxiliary rows
        Self { max_ell: 8 }
    }
}

/// Per-source refinement channels `W_i = X_i + sqrt(v) Z_i` with
/// `v = critical * d / (critical - d)`, attached to encoders through `omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct Augmentation {
    pub d: f64,
    pub critical: f64,
    pub omega: OmegaAssignment,
}

impl Augmentation {
    pub fn new(d: f64, critical: f64, omega: OmegaAssignment) -> Result<Self> {
        if !(d > 0.0 && d < critical) {
            return Err(Error::DistortionNotAdmissible {
                d,
                lower: 0.0,
                upper: critical,
            });
        }
        omega.validate()?;
        Ok(Self { d, critical, omega })
    }

    pub fn noise_variance(&self) -> f64 {
        self.critical * self.d / (self.critical - self.d)
    }
}

/// A Berger-Tung test-channel ensemble: one observation block per size-`m` subset.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxScheme {
    pub channel: TestChannel,
    pub gamma: f64,
    pub m: usize,
    pub augment: Option<Augmentation>,
}

impl AuxScheme {
    /// `m` centered observations `M X_S + sqrt(gamma) N` per subset, `N ~ (0, M)`.
    pub fn minus(m: usize, gamma: f64) -> Self {
        Self {
            channel: TestChannel::Minus,
            gamma,
            m,
            augment: None,
        }
    }

    /// One observation `sum(X_S) + sqrt(gamma) N` per subset, `N ~ (0, 1)`.
    pub fn plus(m: usize, gamma: f64) -> Self {
        Self {
            channel: TestChannel::Plus,
            gamma,
            m,
            augment: None,
        }
    }

    pub fn with_augmentation(mut self, augment: Augmentation) -> Self {
        self.augment = Some(augment);
        self
    }
}

/// Name of one row of a joint covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Source(usize),
    /// Position `pos` of the centered block of subset `subset`.
    Minus { subset: usize, pos: usize },
    Plus { subset: usize },
    /// Refinement channel of source `source`, held by subset `subset`.
    Refine { subset: usize, source: usize },
}

/// Dense covariance of `(X_1..X_ell, auxiliaries)` with row labels.
#[derive(Debug, Clone)]
pub struct JointCovariance {
    pub ell: usize,
    pub matrix: DMatrix<f64>,
    pub labels: Vec<Variable>,
    pub subsets: Vec<Vec<usize>>,
}

impl JointCovariance {
    /// Joint covariance with no auxiliary observations.
    pub fn sources_only(model: &SourceModel) -> Self {
        Self {
            ell: model.ell(),
            matrix: densify(&model.covariance()),
            labels: (0..model.ell()).map(Variable::Source).collect(),
            subsets: Vec::new(),
        }
    }

    pub fn aux_len(&self) -> usize {
        self.labels.len() - self.ell
    }

    pub(crate) fn source_block(&self) -> DMatrix<f64> {
        self.matrix.view((0, 0), (self.ell, self.ell)).into_owned()
    }

    pub(crate) fn cross_block(&self) -> DMatrix<f64> {
        self.matrix
            .view((0, self.ell), (self.ell, self.aux_len()))
            .into_owned()
    }

    pub(crate) fn aux_block(&self) -> DMatrix<f64> {
        let n = self.aux_len();
        self.matrix.view((self.ell, self.ell), (n, n)).into_owned()
    }
}

/// Dense form of an exchangeable matrix.
pub fn densify(mat: &ExchangeableMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(mat.ell, mat.ell, |i, j| mat.entry(i, j))
}

/// Assembles the joint covariance of the sources and every auxiliary
/// observation of `scheme`, with the sources, channel noises, and refinement
/// noises mutually independent.
pub fn build_joint(
    model: &SourceModel,
    scheme: &AuxScheme,
    config: &OracleConfig,
) -> Result<JointCovariance> {
    let ell = model.ell();
    if ell > config.max_ell {
        return Err(Error::OracleCap {
            ell,
            cap: config.max_ell,
        });
    }
    let m = scheme.m;
    let min_m = match scheme.channel {
        TestChannel::Minus => 2,
        TestChannel::Plus => 1,
    };
    if m < min_m || m > ell {
        return Err(Error::SubsetSize { ell, m, min: min_m });
    }
    if !(scheme.gamma.is_finite() && scheme.gamma >= 0.0) {
        return Err(Error::NoiseVariance(scheme.gamma));
    }
    if let Some(aug) = &scheme.augment {
        if aug.omega.ell != ell || aug.omega.m != m {
            return Err(Error::InvalidPartition(format!(
                "assignment built for ({}, {}) used with ({ell}, {m})",
                aug.omega.ell, aug.omega.m
            )));
        }
        aug.omega.validate()?;
    }

    let all = subsets(ell, m);
    let mut loads: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<Variable> = (0..ell).map(Variable::Source).collect();
    // noise blocks along the diagonal of R
    let mut noise: Vec<DMatrix<f64>> = Vec::new();

    for (k, subset) in all.iter().enumerate() {
        match scheme.channel {
            TestChannel::Minus => {
                let center = centering_matrix(m);
                for pos in 0..m {
                    let mut h = vec![0.0; ell];
                    for (j, &src) in subset.iter().enumerate() {
                        h[src] = center[(pos, j)];
                    }
                    loads.push(h);
                    labels.push(Variable::Minus { subset: k, pos });
                }
                noise.push(center * scheme.gamma);
            }
            TestChannel::Plus => {
                let mut h = vec![0.0; ell];
                for &src in subset {
                    h[src] = 1.0;
                }
                loads.push(h);
                labels.push(Variable::Plus { subset: k });
                noise.push(DMatrix::from_element(1, 1, scheme.gamma));
            }
        }
        if let Some(aug) = &scheme.augment {
            for &src in &aug.omega.parts[k] {
                let mut h = vec![0.0; ell];
                h[src] = 1.0;
                loads.push(h);
                labels.push(Variable::Refine { subset: k, source: src });
                noise.push(DMatrix::from_element(1, 1, aug.noise_variance()));
            }
        }
    }

    let n_aux = loads.len();
    let sigma = densify(&model.covariance());
    let h = DMatrix::from_fn(n_aux, ell, |r, c| loads[r][c]);
    let mut r = DMatrix::zeros(n_aux, n_aux);
    let mut at = 0;
    for block in &noise {
        let k = block.nrows();
        r.view_mut((at, at), (k, k)).copy_from(block);
        at += k;
    }
    let cross = &sigma * h.transpose();
    let aux = &h * &cross + r;

    let n = ell + n_aux;
    let mut matrix = DMatrix::zeros(n, n);
    matrix.view_mut((0, 0), (ell, ell)).copy_from(&sigma);
    matrix.view_mut((0, ell), (ell, n_aux)).copy_from(&cross);
    matrix
        .view_mut((ell, 0), (n_aux, ell))
        .copy_from(&cross.transpose());
    matrix.view_mut((ell, ell), (n_aux, n_aux)).copy_from(&aux);

    Ok(JointCovariance {
        ell,
        matrix,
        labels,
        subsets: all,
    })
}

/// `m x m` matrix with `m - 1` on the diagonal and `-1` elsewhere.
pub fn centering_matrix(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| if i == j { m as f64 - 1.0 } else { -1.0 })
}

/// `A^+ B` for symmetric PSD `A`, discarding eigenvalues below
/// [`PINV_RTOL`] times the largest. Fails when `B` has a component in the
/// discarded subspace, since then no conditional expectation exists.
fn pinv_solve(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(a.clone());
    let top = eig.eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cutoff = PINV_RTOL * top;
    let q = &eig.eigenvectors;
    let mut coords = q.transpose() * b;
    let mut leak = 0.0f64;
    for (i, &lam) in eig.eigenvalues.iter().enumerate() {
        let mut row = coords.row_mut(i);
        if lam > cutoff {
            row /= lam;
        } else {
            leak = leak.max(row.amax());
            row.fill(0.0);
        }
    }
    let scale = b.amax().max(1.0);
    if leak > 1e-8 * scale {
        return Err(Error::SingularAuxiliary(leak));
    }
    coords = q * coords;
    Ok(coords)
}

/// `cov(X | auxiliaries) = S_XX - S_XV S_VV^+ S_VX`, symmetrized.
pub fn conditional_covariance(joint: &JointCovariance) -> Result<DMatrix<f64>> {
    let sxx = joint.source_block();
    if joint.aux_len() == 0 {
        return Ok(sxx);
    }
    let sxv = joint.cross_block();
    let solved = pinv_solve(&joint.aux_block(), &sxv.transpose())?;
    let cond = sxx - &sxv * solved;
    Ok((&cond + cond.transpose()) * 0.5)
}

/// `log det` of a symmetric positive definite matrix by Cholesky.
pub fn log_det_spd(a: &DMatrix<f64>) -> Result<f64> {
    let chol = a
        .clone()
        .cholesky()
        .ok_or(Error::SingularConditional)?;
    Ok(2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>())
}

/// Sum rate `1/2 log(det Sigma / det cov(X | auxiliaries))` of the scheme.
pub fn berger_tung_rate(model: &SourceModel, joint: &JointCovariance) -> Result<f64> {
    let cond = conditional_covariance(joint)?;
    Ok(0.5 * (model.log_det_covariance() - log_det_spd(&cond)?))
}

/// Mean diagonal and mean off-diagonal of a square matrix, plus the largest
/// deviation of any entry from that exchangeable form.
pub fn exchangeable_fit(a: &DMatrix<f64>) -> (ExchangeableMatrix, f64) {
    let n = a.nrows();
    let diag = a.diagonal().mean();
    let off = if n > 1 {
        (a.sum() - a.trace()) / (n * (n - 1)) as f64
    } else {
        0.0
    };
    let fit = ExchangeableMatrix::new(n, diag, off);
    let dev = max_entry_error(a, &fit);
    (fit, dev)
}

/// Largest absolute entrywise difference between `a` and an exchangeable matrix.
pub fn max_entry_error(a: &DMatrix<f64>, target: &ExchangeableMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - target.entry(i, j)).abs());
        }
    }
    worst
}
