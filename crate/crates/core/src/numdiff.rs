//! Central finite differences.
//!
//! Step sizes are relative: the base step is multiplied by `1 + ‖x‖`.

use nalgebra::{DMatrix, DVector};

use crate::Result;

/// Base step for first derivatives.
pub const GRAD_STEP: f64 = 1e-5;
/// Base step for second derivatives taken on top of a gradient.
pub const HESS_STEP: f64 = 1e-4;

pub fn scaled_step(base: f64, x: &DVector<f64>) -> f64 {
    base * (1.0 + x.norm())
}

/// Central-difference gradient of a fallible scalar function.
pub fn gradient<F>(f: F, x: &DVector<f64>, base: f64) -> Result<DVector<f64>>
where
    F: Fn(&DVector<f64>) -> Result<f64>,
{
    let h = scaled_step(base, x);
    let mut g = DVector::zeros(x.len());
    let mut xp = x.clone();
    for i in 0..x.len() {
        let xi = x[i];
        xp[i] = xi + h;
        let fp = f(&xp)?;
        xp[i] = xi - h;
        let fm = f(&xp)?;
        xp[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    Ok(g)
}

/// Central-difference Jacobian (rows = outputs) of a fallible vector function.
pub fn jacobian<F>(f: F, x: &DVector<f64>, base: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let h = scaled_step(base, x);
    let mut xp = x.clone();
    let mut cols = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let xi = x[i];
        xp[i] = xi + h;
        let fp = f(&xp)?;
        xp[i] = xi - h;
        let fm = f(&xp)?;
        xp[i] = xi;
        cols.push((fp - fm) / (2.0 * h));
    }
    if cols.is_empty() {
        let rows = f(x)?.len();
        return Ok(DMatrix::zeros(rows, 0));
    }
    Ok(DMatrix::from_columns(&cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_quadratic() {
        let f = |x: &DVector<f64>| Ok(x[0] * x[0] + 3.0 * x[0] * x[1]);
        let x = DVector::from_vec(vec![1.0, 2.0]);
        let g = gradient(f, &x, GRAD_STEP).unwrap();
        assert!((g[0] - 8.0).abs() < 1e-8);
        assert!((g[1] - 3.0).abs() < 1e-8);
    }

    #[test]
    fn jacobian_of_linear_map() {
        let f = |x: &DVector<f64>| Ok(DVector::from_vec(vec![x[0], 2.0 * x[0] - x[1], x[1]]));
        let j = jacobian(f, &DVector::from_vec(vec![0.3, -0.7]), GRAD_STEP).unwrap();
        let expect = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 2.0, -1.0, 0.0, 1.0]);
        assert!((j - expect).amax() < 1e-9);
    }
}
