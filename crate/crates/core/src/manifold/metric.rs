use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::Decoder;
use crate::{Error, Result};

pub const DEFAULT_REGULARIZATION: f64 = 1e-8;

/// Pullback metric `G(y) = J(y)ᵀJ(y) + ε I` of a decoder.
#[derive(Debug, Clone)]
pub struct MetricField {
    decoder: Decoder,
    regularization: f64,
}

impl MetricField {
    pub fn new(decoder: Decoder) -> MetricField {
        MetricField {
            decoder,
            regularization: DEFAULT_REGULARIZATION,
        }
    }

    pub fn with_regularization(mut self, eps: f64) -> Result<MetricField> {
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(Error::InvalidArgument(format!("regularization {eps} must be >= 0")));
        }
        self.regularization = eps;
        Ok(self)
    }

    pub fn decoder(&self) -> &Decoder {
        &self.decoder
    }

    pub fn regularization(&self) -> f64 {
        self.regularization
    }

    pub fn dim(&self) -> usize {
        self.decoder.latent_dim()
    }

    /// True when `G` does not depend on `y`.
    pub fn is_constant(&self) -> bool {
        self.decoder.is_affine()
    }

    /// Symmetric positive-definite `d × d` metric at `y`.
    pub fn metric(&self, y: &DVector<f64>) -> Result<DMatrix<f64>> {
        let j = self.decoder.jacobian(y)?;
        let mut g = j.transpose() * &j;
        for i in 0..g.nrows() {
            g[(i, i)] += self.regularization;
        }
        let g = (&g + g.transpose()) * 0.5;
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::SingularMetric("non-finite metric entries".into()));
        }
        Ok(g)
    }

    pub(crate) fn factor(&self, y: &DVector<f64>) -> Result<Cholesky<f64, Dyn>> {
        let g = self.metric(y)?;
        positive_definite_factor(g).ok_or_else(|| {
            Error::SingularMetric(format!("metric not positive definite at y = {:?}", y.as_slice()))
        })
    }

    /// Checked variant of [`metric`](Self::metric): fails unless `G(y)` is positive definite.
    pub fn pullback_metric(&self, y: &DVector<f64>) -> Result<DMatrix<f64>> {
        let g = self.metric(y)?;
        if positive_definite_factor(g.clone()).is_none() {
            return Err(Error::SingularMetric(format!(
                "metric not positive definite at y = {:?}",
                y.as_slice()
            )));
        }
        Ok(g)
    }

    /// `G(y)⁻¹ v` by Cholesky solve.
    pub fn solve(&self, y: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        if v.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "vector has dim {}, metric is {}",
                v.len(),
                self.dim()
            )));
        }
        Ok(self.factor(y)?.solve(v))
    }
}

/// Cholesky factor whose squared pivots exceed `1e-13` times the largest
/// diagonal entry; plain Cholesky accepts singular inputs whose last pivot
/// is rounding noise.
fn positive_definite_factor(g: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    let scale = g.diagonal().amax();
    let chol = Cholesky::new(g)?;
    let min_pivot = chol.l_dirty().diagonal().min();
    (min_pivot.is_finite() && min_pivot * min_pivot > 1e-13 * scale && scale > 0.0).then_some(chol)
}
