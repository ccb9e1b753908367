//! Neural Differential Manifold geometry.
//!
//! A [`Decoder`] maps latent coordinates `y ∈ R^d` to ambient points in `R^n`;
//! the pullback of the ambient Euclidean metric gives `G(y) = JᵀJ`. Geodesics
//! are generated by the Hamiltonian `½ pᵀG⁻¹p` and integrated with leapfrog.
//! Christoffel symbols are never formed: `∂H/∂y` is taken by finite
//! differences on `H` itself.

mod decoder;
mod format;
mod geodesic;
mod hamiltonian;
mod jacobi;
mod metric;

pub use decoder::{Decoder, Layer};
pub use format::{read_decoder, trajectory_csv, write_decoder};
pub use geodesic::{
    geodesic_distance, loss_geo, shoot_geodesic, solve_shooting, GeodesicPair, ShootingSolution,
};
pub use hamiltonian::{
    hamiltonian_field, integrate, leapfrog_step, FnHamiltonian, GeodesicHamiltonian, Hamiltonian,
    Oscillator,
};
pub use jacobi::{
    finite_perturbation_deviation, jacobi_propagate, loss_jac, variational_matrix, JacobiCase,
};
pub use metric::{MetricField, DEFAULT_REGULARIZATION};

use nalgebra::DVector;

use crate::{Error, Result};

/// Canonical coordinates `(y, p)` on the cotangent bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub y: DVector<f64>,
    pub p: DVector<f64>,
}

impl PhasePoint {
    pub fn new(y: DVector<f64>, p: DVector<f64>) -> Result<PhasePoint> {
        if y.len() != p.len() {
            return Err(Error::Dimension(format!(
                "position has dim {}, momentum {}",
                y.len(),
                p.len()
            )));
        }
        if y.iter().chain(p.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite phase point".into()));
        }
        Ok(PhasePoint { y, p })
    }

    pub fn from_slices(y: &[f64], p: &[f64]) -> Result<PhasePoint> {
        PhasePoint::new(DVector::from_column_slice(y), DVector::from_column_slice(p))
    }

    pub fn dim(&self) -> usize {
        self.y.len()
    }

    /// Stacked `(y, p)` as a single `2d` vector.
    pub fn stacked(&self) -> DVector<f64> {
        let d = self.dim();
        DVector::from_iterator(2 * d, self.y.iter().chain(self.p.iter()).copied())
    }

    pub fn from_stacked(z: &DVector<f64>) -> PhasePoint {
        let d = z.len() / 2;
        PhasePoint {
            y: z.rows(0, d).into_owned(),
            p: z.rows(d, d).into_owned(),
        }
    }
}

/// Uniformly stepped sequence of phase points.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrajectory {
    points: Vec<PhasePoint>,
    step: f64,
}

impl PhaseTrajectory {
    pub fn new(points: Vec<PhasePoint>, step: f64) -> Result<PhaseTrajectory> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("empty trajectory".into()));
        }
        if !step.is_finite() {
            return Err(Error::InvalidArgument("non-finite step".into()));
        }
        Ok(PhaseTrajectory { points, step })
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> &PhasePoint {
        self.points.last().expect("trajectory is non-empty")
    }

    /// Flow time of node `k`.
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }
}
