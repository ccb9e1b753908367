//! Micro-level spin representation.
//!
//! Tokens, attention heads, CTM neurons and FFN hidden states are all modelled
//! as unit vectors ("spins") coupled through a pairwise matrix `J`, optional
//! three-body terms `K_ijk` and per-spin external fields `h_i`.

mod attention;
mod bath;
mod ctm;
mod energy;
mod format;

pub use attention::{attention_couplings, bond_energies, gibbs_attention, gibbs_weights, head_output};
pub use bath::{ffn_target, micro_step, pre_normalization_step, BathParams, Nonlinearity};
pub use ctm::{ctm_couplings, effective_influence, SynapseKernel};
pub use energy::{
    energy_gradient, three_body_energy, two_body_energy, two_body_energy_of, SymmetricForm,
};
pub use format::{read_spin_system, write_spin_system};

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Tolerance on `‖s‖ = 1` accepted when wrapping an existing vector.
pub const UNIT_TOL: f64 = 1e-9;
/// Below this length a vector has no usable direction.
pub const MIN_NORM: f64 = 1e-12;

/// A unit vector on `S^{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spin(DVector<f64>);

impl Spin {
    /// Normalises `v`; fails if `v` is (numerically) zero or non-finite.
    pub fn normalize(v: DVector<f64>) -> Result<Spin> {
        let n = v.norm();
        if !n.is_finite() || n < MIN_NORM {
            return Err(Error::DegenerateDirection { index: None, norm: n });
        }
        Ok(Spin(v / n))
    }

    /// Wraps a vector that is already unit length.
    pub fn from_unit(v: DVector<f64>) -> Result<Spin> {
        let n = v.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidArgument(format!("spin has norm {n}, expected 1")));
        }
        Ok(Spin(v))
    }

    pub fn from_slice(xs: &[f64]) -> Result<Spin> {
        Spin::normalize(DVector::from_column_slice(xs))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.0
    }

    pub fn dot(&self, other: &Spin) -> f64 {
        self.0.dot(&other.0)
    }
}

/// One three-body coupling `K_ijk` with `i < j < k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeBody {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub strength: f64,
}

/// N spins with couplings, three-body terms and external fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    spins: Vec<Spin>,
    couplings: DMatrix<f64>,
    three_body: Vec<ThreeBody>,
    fields: Vec<DVector<f64>>,
}

impl SpinSystem {
    /// Builds a system with zero external fields and no three-body terms.
    pub fn new(spins: Vec<Spin>, couplings: DMatrix<f64>) -> Result<SpinSystem> {
        let n = spins.len();
        if n == 0 {
            return Err(Error::DegenerateSystem("no spins".into()));
        }
        let d = spins[0].dim();
        if let Some((i, s)) = spins.iter().enumerate().find(|(_, s)| s.dim() != d) {
            return Err(Error::Dimension(format!(
                "spin {i} has dimension {}, expected {d}",
                s.dim()
            )));
        }
        if couplings.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "couplings are {:?}, expected {n}x{n}",
                couplings.shape()
            )));
        }
        if couplings.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coupling".into()));
        }
        Ok(SpinSystem {
            fields: vec![DVector::zeros(d); n],
            spins,
            couplings,
            three_body: Vec::new(),
        })
    }

    pub fn with_fields(mut self, fields: Vec<DVector<f64>>) -> Result<SpinSystem> {
        if fields.len() != self.len() || fields.iter().any(|h| h.len() != self.dim()) {
            return Err(Error::Dimension(format!(
                "expected {} fields of dimension {}",
                self.len(),
                self.dim()
            )));
        }
        self.fields = fields;
        Ok(self)
    }

    pub fn with_three_body(mut self, terms: Vec<ThreeBody>) -> Result<SpinSystem> {
        for t in &terms {
            if !(t.i < t.j && t.j < t.k) {
                return Err(Error::InvalidArgument(format!(
                    "three-body indices ({}, {}, {}) must be strictly increasing",
                    t.i, t.j, t.k
                )));
            }
            if t.k >= self.len() {
                return Err(Error::IndexOutOfRange { index: t.k, len: self.len() });
            }
        }
        self.three_body = terms;
        Ok(self)
    }

    /// Replaces `J` by `(J + Jᵀ)/2`.
    pub fn symmetrized(mut self) -> SpinSystem {
        self.couplings = symmetric_part(&self.couplings);
        self
    }

    /// Same couplings and fields, new spin configuration.
    pub fn with_spins(&self, spins: Vec<Spin>) -> Result<SpinSystem> {
        if spins.len() != self.len() || spins.iter().any(|s| s.dim() != self.dim()) {
            return Err(Error::Dimension("replacement spins do not match system shape".into()));
        }
        Ok(SpinSystem { spins, ..self.clone() })
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.spins[0].dim()
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn couplings(&self) -> &DMatrix<f64> {
        &self.couplings
    }

    pub fn three_body(&self) -> &[ThreeBody] {
        &self.three_body
    }

    pub fn fields(&self) -> &[DVector<f64>] {
        &self.fields
    }
}

pub(crate) fn symmetric_part(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Default coarse-graining `Φ(S)`: the mean of the spin vectors.
pub fn mean_pool(spins: &[Spin]) -> Result<DVector<f64>> {
    let first = spins
        .first()
        .ok_or_else(|| Error::DegenerateSystem("no spins to pool".into()))?;
    let mut acc = DVector::zeros(first.dim());
    for s in spins {
        if s.dim() != first.dim() {
            return Err(Error::Dimension("mixed spin dimensions".into()));
        }
        acc += s.as_vector();
    }
    Ok(acc / spins.len() as f64)
}
