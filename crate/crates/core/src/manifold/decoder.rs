use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::numdiff::{self, GRAD_STEP};
use crate::{Error, Result};

/// Affine layer `x ↦ W x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weight: DMatrix<f64>,
    pub bias: DVector<f64>,
}

impl Layer {
    pub fn new(weight: DMatrix<f64>, bias: DVector<f64>) -> Result<Layer> {
        if bias.len() != weight.nrows() {
            return Err(Error::Dimension(format!(
                "bias has {} entries for {} outputs",
                bias.len(),
                weight.nrows()
            )));
        }
        if weight.iter().chain(bias.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite layer weight".into()));
        }
        Ok(Layer { weight, bias })
    }

    fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.weight * x + &self.bias
    }
}

type CustomMap = dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync;

/// Smooth map `G_φ : R^d → R^n` from latent coordinates to ambient space.
#[derive(Clone)]
pub enum Decoder {
    Linear(Layer),
    /// Stack of affine layers, each followed by `tanh`.
    MlpTanh(Vec<Layer>),
    /// User-supplied map; its Jacobian is taken by central differences.
    Custom {
        latent_dim: usize,
        ambient_dim: usize,
        map: Arc<CustomMap>,
    },
}

impl fmt::Debug for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoder::Linear(l) => f.debug_tuple("Linear").field(l).finish(),
            Decoder::MlpTanh(ls) => f.debug_tuple("MlpTanh").field(ls).finish(),
            Decoder::Custom { latent_dim, ambient_dim, .. } => f
                .debug_struct("Custom")
                .field("latent_dim", latent_dim)
                .field("ambient_dim", ambient_dim)
                .finish_non_exhaustive(),
        }
    }
}

impl Decoder {
    pub fn linear(weight: DMatrix<f64>, bias: DVector<f64>) -> Result<Decoder> {
        let layer = Layer::new(weight, bias)?;
        check_dims(layer.weight.ncols(), layer.weight.nrows())?;
        Ok(Decoder::Linear(layer))
    }

    /// Bias-free linear decoder.
    pub fn from_matrix(weight: DMatrix<f64>) -> Result<Decoder> {
        let n = weight.nrows();
        Decoder::linear(weight, DVector::zeros(n))
    }

    pub fn mlp_tanh(layers: Vec<Layer>) -> Result<Decoder> {
        let first = layers
            .first()
            .ok_or_else(|| Error::InvalidArgument("MLP needs at least one layer".into()))?;
        let d = first.weight.ncols();
        for pair in layers.windows(2) {
            if pair[1].weight.ncols() != pair[0].weight.nrows() {
                return Err(Error::Dimension(format!(
                    "layer outputs {} feed a layer expecting {}",
                    pair[0].weight.nrows(),
                    pair[1].weight.ncols()
                )));
            }
        }
        let n = layers.last().map(|l| l.weight.nrows()).unwrap_or(0);
        check_dims(d, n)?;
        Ok(Decoder::MlpTanh(layers))
    }

    pub fn custom<F>(latent_dim: usize, ambient_dim: usize, map: F) -> Result<Decoder>
    where
        F: Fn(&DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
    {
        check_dims(latent_dim, ambient_dim)?;
        Ok(Decoder::Custom {
            latent_dim,
            ambient_dim,
            map: Arc::new(map),
        })
    }

    pub fn latent_dim(&self) -> usize {
        match self {
            Decoder::Linear(l) => l.weight.ncols(),
            Decoder::MlpTanh(ls) => ls[0].weight.ncols(),
            Decoder::Custom { latent_dim, .. } => *latent_dim,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Decoder::Linear(l) => l.weight.nrows(),
            Decoder::MlpTanh(ls) => ls[ls.len() - 1].weight.nrows(),
            Decoder::Custom { ambient_dim, .. } => *ambient_dim,
        }
    }

    /// True when the Jacobian does not depend on `y`.
    pub fn is_affine(&self) -> bool {
        matches!(self, Decoder::Linear(_))
    }

    fn check_input(&self, y: &DVector<f64>) -> Result<()> {
        if y.len() != self.latent_dim() {
            return Err(Error::Dimension(format!(
                "latent point has dim {}, decoder expects {}",
                y.len(),
                self.latent_dim()
            )));
        }
        Ok(())
    }

    /// `z = G_φ(y)`.
    pub fn eval(&self, y: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_input(y)?;
        let z = match self {
            Decoder::Linear(l) => l.apply(y),
            Decoder::MlpTanh(ls) => ls
                .iter()
                .fold(y.clone(), |x, l| l.apply(&x).map(f64::tanh)),
            Decoder::Custom { map, ambient_dim, .. } => {
                let z = map(y);
                if z.len() != *ambient_dim {
                    return Err(Error::Dimension(format!(
                        "custom decoder returned {} values, expected {ambient_dim}",
                        z.len()
                    )));
                }
                z
            }
        };
        Ok(z)
    }

    /// `n × d` Jacobian of the decoder at `y`.
    pub fn jacobian(&self, y: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check_input(y)?;
        match self {
            Decoder::Linear(l) => Ok(l.weight.clone()),
            Decoder::MlpTanh(ls) => {
                let mut x = y.clone();
                let mut jac = DMatrix::identity(y.len(), y.len());
                for l in ls {
                    let a = l.apply(&x).map(f64::tanh);
                    let mut local = l.weight.clone();
                    for (r, t) in a.iter().enumerate() {
                        local.row_mut(r).scale_mut(1.0 - t * t);
                    }
                    jac = local * jac;
                    x = a;
                }
                Ok(jac)
            }
            Decoder::Custom { .. } => numdiff::jacobian(|v| self.eval(v), y, GRAD_STEP),
        }
    }
}

fn check_dims(d: usize, n: usize) -> Result<()> {
    if d == 0 || n < d {
        return Err(Error::Dimension(format!(
            "decoder must satisfy n >= d >= 1 (d = {d}, n = {n})"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn linear_eval_and_jacobian() {
        let a = DMatrix::from_column_slice(2, 1, &[1.0, 2.0]);
        let dec = Decoder::from_matrix(a.clone()).unwrap();
        assert_eq!(dec.eval(&v(&[3.0])).unwrap(), v(&[3.0, 6.0]));
        assert_eq!(dec.jacobian(&v(&[-7.0])).unwrap(), a);
    }

    #[test]
    fn zero_weights_give_bias() {
        let dec = Decoder::linear(DMatrix::zeros(3, 2), v(&[1.0, -1.0, 0.5])).unwrap();
        assert_eq!(dec.eval(&v(&[4.0, 5.0])).unwrap(), v(&[1.0, -1.0, 0.5]));
    }

    #[test]
    fn single_tanh_layer_at_origin() {
        let layer = Layer::new(DMatrix::from_element(1, 1, 1.0), v(&[0.0])).unwrap();
        let dec = Decoder::mlp_tanh(vec![layer]).unwrap();
        assert_eq!(dec.eval(&v(&[0.0])).unwrap(), v(&[0.0]));
        assert_eq!(dec.jacobian(&v(&[0.0])).unwrap()[(0, 0)], 1.0);
    }

    #[test]
    fn rejects_n_less_than_d() {
        assert!(Decoder::from_matrix(DMatrix::zeros(1, 2)).is_err());
        assert!(Decoder::mlp_tanh(vec![]).is_err());
    }

    #[test]
    fn custom_jacobian_by_differences() {
        let dec = Decoder::custom(1, 2, |y| DVector::from_vec(vec![y[0], 0.5 * y[0] * y[0]])).unwrap();
        let j = dec.jacobian(&v(&[1.5])).unwrap();
        assert!((j[(0, 0)] - 1.0).abs() < 1e-9);
        assert!((j[(1, 0)] - 1.5).abs() < 1e-9);
    }
}
