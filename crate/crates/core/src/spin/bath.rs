//! Non-Hamiltonian bath: FFN target relaxation plus damping.

use nalgebra::{DMatrix, DVector};

use super::energy::energy_gradient;
use super::{Spin, SpinSystem, MIN_NORM};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonlinearity {
    Tanh,
    /// Tanh approximation of GELU.
    Gelu,
}

impl Nonlinearity {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Nonlinearity::Tanh => x.tanh(),
            Nonlinearity::Gelu => {
                let c = (2.0 / std::f64::consts::PI).sqrt();
                0.5 * x * (1.0 + (c * (x + 0.044715 * x * x * x)).tanh())
            }
        }
    }
}

/// Step sizes, damping and FFN weights for the bath update.
///
/// `w1` is `d_ff × (d + m)`: the first `d` columns act on the hidden state,
/// the trailing `m` columns on the external drive.
#[derive(Debug, Clone, PartialEq)]
pub struct BathParams {
    pub eta: f64,
    pub eta_ff: f64,
    pub gamma: Vec<f64>,
    pub w1: DMatrix<f64>,
    pub b1: DVector<f64>,
    pub w2: DMatrix<f64>,
    pub b2: DVector<f64>,
    pub nonlinearity: Nonlinearity,
}

impl BathParams {
    /// A bath with zero FFN weights (target = residual direction) and `d_ff = d`.
    pub fn zero_ffn(d: usize, n: usize, eta: f64, eta_ff: f64, gamma: f64) -> BathParams {
        BathParams {
            eta,
            eta_ff,
            gamma: vec![gamma; n],
            w1: DMatrix::zeros(d, d),
            b1: DVector::zeros(d),
            w2: DMatrix::zeros(d, d),
            b2: DVector::zeros(d),
            nonlinearity: Nonlinearity::Tanh,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64| x.is_finite();
        if !(self.eta >= 0.0 && finite(self.eta)) || !(self.eta_ff >= 0.0 && finite(self.eta_ff)) {
            return Err(Error::InvalidArgument(format!(
                "step sizes must be finite and non-negative (eta {}, eta_ff {})",
                self.eta, self.eta_ff
            )));
        }
        if let Some(g) = self.gamma.iter().find(|g| !(**g >= 0.0) || !g.is_finite()) {
            return Err(Error::InvalidArgument(format!("damping {g} must be >= 0")));
        }
        let d_ff = self.w1.nrows();
        if self.b1.len() != d_ff || self.w2.ncols() != d_ff || self.b2.len() != self.w2.nrows() {
            return Err(Error::Dimension("inconsistent FFN weight shapes".into()));
        }
        Ok(())
    }

    fn hidden_dim(&self) -> usize {
        self.w2.nrows()
    }
}

/// FFN target direction `(h + W₂σ(W₁[h; x_ext] + b₁) + b₂) / ‖·‖`.
///
/// Pass an empty `x_ext` when `W₁` has no drive columns.
pub fn ffn_target(h: &DVector<f64>, x_ext: &DVector<f64>, bath: &BathParams) -> Result<Spin> {
    let d = bath.hidden_dim();
    if h.len() != d {
        return Err(Error::Dimension(format!("hidden state has dim {}, FFN expects {d}", h.len())));
    }
    if bath.w1.ncols() != d + x_ext.len() {
        return Err(Error::Dimension(format!(
            "W1 has {} input columns, got state {} + drive {}",
            bath.w1.ncols(),
            d,
            x_ext.len()
        )));
    }
    let input = if x_ext.is_empty() {
        h.clone()
    } else {
        DVector::from_iterator(d + x_ext.len(), h.iter().chain(x_ext.iter()).copied())
    };
    let pre = &bath.w1 * input + &bath.b1;
    let act = pre.map(|x| bath.nonlinearity.apply(x));
    let out = h + &bath.w2 * act + &bath.b2;
    let n = out.norm();
    if !n.is_finite() || n <= MIN_NORM {
        return Err(Error::DegenerateDirection { index: None, norm: n });
    }
    Ok(Spin(out / n))
}

/// The update `ŝ_i = s_i − η ∂H/∂s_i + η_ff (s̃_i − s_i) − γ_i s_i` before
/// renormalisation.
pub fn pre_normalization_step(
    sys: &SpinSystem,
    bath: &BathParams,
    x_ext: &DVector<f64>,
) -> Result<Vec<DVector<f64>>> {
    bath.validate()?;
    if bath.gamma.len() != sys.len() {
        return Err(Error::Dimension(format!(
            "{} damping coefficients for {} spins",
            bath.gamma.len(),
            sys.len()
        )));
    }
    let grads = energy_gradient(sys);
    sys.spins()
        .iter()
        .zip(grads)
        .enumerate()
        .map(|(i, (s, g))| {
            let s = s.as_vector();
            let mut next = s - g * bath.eta - s * bath.gamma[i];
            if bath.eta_ff != 0.0 {
                let target = ffn_target(s, x_ext, bath).map_err(|e| match e {
                    Error::DegenerateDirection { norm, .. } => {
                        Error::DegenerateDirection { index: Some(i), norm }
                    }
                    other => other,
                })?;
                next += (target.as_vector() - s) * bath.eta_ff;
            }
            Ok(next)
        })
        .collect()
}

/// One micro update of every spin followed by projection back to the sphere.
pub fn micro_step(sys: &SpinSystem, bath: &BathParams, x_ext: &DVector<f64>) -> Result<SpinSystem> {
    let raw = pre_normalization_step(sys, bath, x_ext)?;
    let spins = raw
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let n = v.norm();
            if !n.is_finite() || n < MIN_NORM {
                return Err(Error::DegenerateDirection { index: Some(i), norm: n });
            }
            Ok(Spin(v / n))
        })
        .collect::<Result<Vec<_>>>()?;
    sys.with_spins(spins)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn residual_only_target() {
        let bath = BathParams::zero_ffn(2, 1, 0.0, 1.0, 0.0);
        let t = ffn_target(&v(&[3.0, 0.0]), &v(&[]), &bath).unwrap();
        assert_eq!(t.as_vector(), &v(&[1.0, 0.0]));
    }

    #[test]
    fn cancelling_bias_is_degenerate() {
        let mut bath = BathParams::zero_ffn(2, 1, 0.0, 1.0, 0.0);
        bath.b2 = v(&[-3.0, 0.0]);
        assert!(matches!(
            ffn_target(&v(&[3.0, 0.0]), &v(&[]), &bath),
            Err(Error::DegenerateDirection { .. })
        ));
    }

    #[test]
    fn scalar_tanh_target() {
        let mut bath = BathParams::zero_ffn(1, 1, 0.0, 1.0, 0.0);
        bath.w1 = DMatrix::from_element(1, 1, 1.0);
        bath.w2 = DMatrix::from_element(1, 1, 1.0);
        let t = ffn_target(&v(&[1.0]), &v(&[]), &bath).unwrap();
        assert_eq!(t.as_vector()[0], 1.0);
    }

    #[test]
    fn drive_enters_through_extra_columns() {
        let mut bath = BathParams::zero_ffn(2, 1, 0.0, 1.0, 0.0);
        bath.w1 = DMatrix::from_row_slice(2, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, 10.0]);
        bath.w2 = DMatrix::identity(2, 2) * 100.0;
        let t = ffn_target(&v(&[1.0, 0.0]), &v(&[1.0]), &bath).unwrap();
        assert!(t.as_vector()[1] > 0.99);
        assert!(ffn_target(&v(&[1.0, 0.0]), &v(&[]), &bath).is_err());
    }

    fn single(s: &[f64]) -> SpinSystem {
        SpinSystem::new(vec![Spin::from_slice(s).unwrap()], DMatrix::zeros(1, 1)).unwrap()
    }

    #[test]
    fn relaxes_fully_to_target() {
        let mut bath = BathParams::zero_ffn(2, 1, 0.0, 1.0, 0.0);
        bath.b2 = v(&[-1.0, 1.0]);
        let next = micro_step(&single(&[1.0, 0.0]), &bath, &v(&[])).unwrap();
        let s = next.spins()[0].as_vector();
        assert!((s - v(&[0.0, 1.0])).amax() < 1e-15);
    }

    #[test]
    fn zero_steps_are_identity() {
        let spins = vec![
            Spin::from_slice(&[0.3, 0.4]).unwrap(),
            Spin::from_slice(&[-1.0, 2.0]).unwrap(),
        ];
        let sys = SpinSystem::new(spins, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let bath = BathParams::zero_ffn(2, 2, 0.0, 0.0, 0.0);
        let next = micro_step(&sys, &bath, &v(&[])).unwrap();
        for (a, b) in next.spins().iter().zip(sys.spins()) {
            assert!((a.as_vector() - b.as_vector()).amax() < 1e-15);
        }
    }

    #[test]
    fn full_damping_names_the_neuron() {
        let spins = vec![Spin::from_slice(&[1.0, 0.0]).unwrap(); 2];
        let sys = SpinSystem::new(spins, DMatrix::zeros(2, 2)).unwrap();
        let mut bath = BathParams::zero_ffn(2, 2, 0.0, 0.0, 0.0);
        bath.gamma = vec![0.0, 1.0];
        match micro_step(&sys, &bath, &v(&[])) {
            Err(Error::DegenerateDirection { index: Some(1), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_damping_rejected() {
        let mut bath = BathParams::zero_ffn(2, 1, 0.1, 0.1, 0.0);
        bath.gamma = vec![-0.1];
        assert!(bath.validate().is_err());
    }
}
