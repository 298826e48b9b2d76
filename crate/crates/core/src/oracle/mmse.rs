//! Closed-form linear MMSE weights of the unaugmented test channels.

use nalgebra::DMatrix;

use super::{AuxScheme, JointCovariance, Variable};
use crate::error::{Error, Result};
use crate::generalized::{binomial, eta_coefficients, TestChannel};
use crate::model::SourceModel;

/// Weights of the estimator of `X_i` from the auxiliary observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MmseWeights {
    /// `X_i ~ kappa * sum over S containing i of U^-_{S, pos(i)}`.
    Minus { kappa: f64 },
    /// `X_i ~ alpha * sum over S containing i of U^+_S + beta * sum over the rest`.
    Plus { alpha: f64, beta: f64 },
}

pub fn mmse_weights(model: &SourceModel, scheme: &AuxScheme) -> Result<MmseWeights> {
    if scheme.augment.is_some() {
        return Err(Error::SchemeMismatch("closed-form weights exist only without refinement channels"));
    }
    let (ell, m, g, rho) = (model.ell() as i64, scheme.m as i64, scheme.gamma, model.rho());
    if m < 1 || m > ell {
        return Err(Error::SubsetSize { ell: model.ell(), m: scheme.m, min: 1 });
    }
    if !(g.is_finite() && g >= 0.0) {
        return Err(Error::NoiseVariance(g));
    }
    let l = ell as f64;
    match scheme.channel {
        TestChannel::Minus => {
            if m < 2 {
                return Err(Error::SubsetSize { ell: model.ell(), m: scheme.m, min: 2 });
            }
            let kappa = (1.0 - rho) / (g + binomial(ell - 2, m - 2) * l * (1.0 - rho));
            Ok(MmseWeights::Minus { kappa })
        }
        TestChannel::Plus => {
            let eta = eta_coefficients(model, scheme.m)?;
            let mf = m as f64;
            let outer = (1.0 - rho) * (1.0 + (l - 1.0) * rho);
            let den = g * g + eta.eta2 * g + eta.eta1;
            let alpha = ((1.0 + (mf - 1.0) * rho) * g + binomial(ell - 2, m - 1) * mf * outer) / den;
            let beta = (mf * rho * g - binomial(ell - 2, m - 2) * mf * outer) / den;
            Ok(MmseWeights::Plus { alpha, beta })
        }
    }
}

/// The `ell x n_aux` matrix `W` with `X_hat = W V`.
pub fn weight_matrix(joint: &JointCovariance, weights: &MmseWeights) -> Result<DMatrix<f64>> {
    let aux = &joint.labels[joint.ell..];
    let mut w = DMatrix::zeros(joint.ell, aux.len());
    for (col, label) in aux.iter().enumerate() {
        match (label, weights) {
            (Variable::Minus { subset, pos }, MmseWeights::Minus { kappa }) => {
                w[(joint.subsets[*subset][*pos], col)] = *kappa;
            }
            (Variable::Plus { subset }, MmseWeights::Plus { alpha, beta }) => {
                let members = &joint.subsets[*subset];
                for i in 0..joint.ell {
                    w[(i, col)] = if members.contains(&i) { *alpha } else { *beta };
                }
            }
            _ => return Err(Error::SchemeMismatch("weights do not match the joint covariance")),
        }
    }
    Ok(w)
}

/// Largest `|E[(X_i - X_hat_i) V_k]|` over all sources and auxiliaries.
pub fn orthogonality_residual(joint: &JointCovariance, w: &DMatrix<f64>) -> f64 {
    (joint.cross_block() - w * joint.aux_block()).amax()
}

/// `E[(X - W V)(X - W V)^T]`.
pub fn estimator_error_covariance(joint: &JointCovariance, w: &DMatrix<f64>) -> DMatrix<f64> {
    let sxv = joint.cross_block();
    let wsvx = w * sxv.transpose();
    let err = joint.source_block() - &wsvx - wsvx.transpose() + w * joint.aux_block() * w.transpose();
    (&err + err.transpose()) * 0.5
}
