use nalgebra::DMatrix;

use super::Spin;
use crate::{Error, Result};

/// Finite-support temporal synapse kernel `k_ij(Δτ)`, `Δτ = 0..L−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SynapseKernel {
    taps: Vec<f64>,
}

impl SynapseKernel {
    pub fn new(taps: Vec<f64>) -> Result<SynapseKernel> {
        if taps.is_empty() {
            return Err(Error::InvalidArgument("synapse kernel needs at least one tap".into()));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("non-finite kernel tap".into()));
        }
        Ok(SynapseKernel { taps })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }
}

/// Time-integrated gain `W_ij = Σ_Δτ k_ij(Δτ)`.
pub fn effective_influence(kernel: &SynapseKernel) -> f64 {
    kernel.taps.iter().sum()
}

/// Blended CTM couplings
/// `J_ij = α (W_ij + W_ji)/2 + (1 − α) (1/T) Σ_τ s_i(τ)·s_j(τ)`.
///
/// `history[τ]` holds the N spins at tick τ.
pub fn ctm_couplings(w: &DMatrix<f64>, history: &[Vec<Spin>], alpha: f64) -> Result<DMatrix<f64>> {
    if history.is_empty() {
        return Err(Error::InvalidArgument("empty spin history".into()));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("blend {alpha} outside [0, 1]")));
    }
    let n = w.nrows();
    if w.ncols() != n {
        return Err(Error::Dimension(format!("W is {:?}, expected square", w.shape())));
    }
    let mut sync = DMatrix::zeros(n, n);
    for (tau, frame) in history.iter().enumerate() {
        if frame.len() != n {
            return Err(Error::Dimension(format!(
                "tick {tau} has {} spins, expected {n}",
                frame.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                sync[(i, j)] += frame[i].dot(&frame[j]);
            }
        }
    }
    sync /= history.len() as f64;
    let structural = (w + w.transpose()) * 0.5;
    Ok(structural * alpha + sync * (1.0 - alpha))
}
