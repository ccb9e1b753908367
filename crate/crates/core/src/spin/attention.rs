use nalgebra::{DMatrix, DVector};

use super::{symmetric_part, SpinSystem};
use crate::{Error, Result};

/// Smallest inverse temperature accepted by [`gibbs_attention`].
pub const MIN_BETA: f64 = 1e-12;

/// `J_ij = q_i·k_j / √d`, optionally replaced by `(J + Jᵀ)/2`.
///
/// Rows of `q` and `k` are the per-position query and key vectors.
pub fn attention_couplings(q: &DMatrix<f64>, k: &DMatrix<f64>, symmetrize: bool) -> Result<DMatrix<f64>> {
    if q.shape() != k.shape() {
        return Err(Error::Dimension(format!(
            "queries {:?} vs keys {:?}",
            q.shape(),
            k.shape()
        )));
    }
    let d = q.ncols();
    if d == 0 {
        return Err(Error::Dimension("query/key dimension must be at least 1".into()));
    }
    let j = q * k.transpose() / (d as f64).sqrt();
    Ok(if symmetrize { symmetric_part(&j) } else { j })
}

/// Bond energies `E_ij = −J_ij s_i·s_j` for all `j ≠ i`, in index order.
pub fn bond_energies(i: usize, sys: &SpinSystem) -> Result<Vec<f64>> {
    let n = sys.len();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let si = &sys.spins()[i];
    Ok((0..n)
        .filter(|&j| j != i)
        .map(|j| -sys.couplings()[(i, j)] * si.dot(&sys.spins()[j]))
        .collect())
}

/// Softmax of `−β E` with max-subtraction.
pub fn gibbs_weights(energies: &[f64], beta: f64) -> Result<Vec<f64>> {
    if !(beta >= MIN_BETA) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("inverse temperature {beta} must be >= {MIN_BETA}")));
    }
    if energies.is_empty() {
        return Err(Error::DegenerateSystem("no keys to attend to".into()));
    }
    let logits: Vec<f64> = energies.iter().map(|e| -beta * e).collect();
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let z: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / z).collect())
}

/// Gibbs attention distribution `π_ij ∝ exp(−β E_ij)` of query `i` over `j ≠ i`.
pub fn gibbs_attention(i: usize, sys: &SpinSystem, beta: f64) -> Result<Vec<f64>> {
    if sys.len() < 2 {
        return Err(Error::DegenerateSystem(
            "attention needs at least one key other than the query".into(),
        ));
    }
    gibbs_weights(&bond_energies(i, sys)?, beta)
}

/// Value readout `h_i = Σ_j π_ij v_j`.
pub fn head_output(pi: &[f64], values: &[DVector<f64>]) -> Result<DVector<f64>> {
    if pi.len() != values.len() {
        return Err(Error::Dimension(format!(
            "{} weights for {} values",
            pi.len(),
            values.len()
        )));
    }
    let first = values
        .first()
        .ok_or_else(|| Error::DegenerateSystem("no values".into()))?;
    let mut out = DVector::zeros(first.len());
    for (w, v) in pi.iter().zip(values) {
        if v.len() != first.len() {
            return Err(Error::Dimension("values have mixed dimensions".into()));
        }
        out += v * *w;
    }
    Ok(out)
}
