use nalgebra::DVector;

use super::{MetricField, PhasePoint, PhaseTrajectory};
use crate::numdiff::{self, GRAD_STEP};
use crate::{Error, Result};

/// A scalar function `H(y, p)` on phase space.
///
/// Gradients default to central differences; implementors override them where
/// an analytic form is cheap.
pub trait Hamiltonian {
    fn dim(&self) -> usize;

    fn value(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<f64>;

    fn grad_y(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<DVector<f64>> {
        numdiff::gradient(|yy| self.value(yy, p), y, GRAD_STEP)
    }

    fn grad_p(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<DVector<f64>> {
        numdiff::gradient(|pp| self.value(y, pp), p, GRAD_STEP)
    }

    fn energy(&self, pt: &PhasePoint) -> Result<f64> {
        self.value(&pt.y, &pt.p)
    }
}

impl<H: Hamiltonian + ?Sized> Hamiltonian for &H {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<f64> {
        (**self).value(y, p)
    }
    fn grad_y(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<DVector<f64>> {
        (**self).grad_y(y, p)
    }
    fn grad_p(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<DVector<f64>> {
        (**self).grad_p(y, p)
    }
}

/// `H = ½(‖y‖² + ‖p‖²)`.
#[derive(Debug, Clone, Copy)]
pub struct Oscillator {
    pub dim: usize,
}

impl Hamiltonian for Oscillator {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<f64> {
        Ok(0.5 * (y.norm_squared() + p.norm_squared()))
    }
    fn grad_y(&self, y: &DVector<f64>, _p: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(y.clone())
    }
    fn grad_p(&self, _y: &DVector<f64>, p: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(p.clone())
    }
}

/// Hamiltonian given by a closure; both gradients by finite differences.
pub struct FnHamiltonian<F> {
    dim: usize,
    f: F,
}

impl<F> FnHamiltonian<F>
where
    F: Fn(&DVector<f64>, &DVector<f64>) -> f64,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnHamiltonian { dim, f }
    }
}

impl<F> Hamiltonian for FnHamiltonian<F>
where
    F: Fn(&DVector<f64>, &DVector<f64>) -> f64,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<f64> {
        Ok((self.f)(y, p))
    }
}

/// Geodesic Hamiltonian `½ pᵀ G(y)⁻¹ p` of a pullback metric.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicHamiltonian<'a> {
    pub metric: &'a MetricField,
}

impl<'a> GeodesicHamiltonian<'a> {
    pub fn new(metric: &'a MetricField) -> Self {
        GeodesicHamiltonian { metric }
    }
}

impl Hamiltonian for GeodesicHamiltonian<'_> {
    fn dim(&self) -> usize {
        self.metric.dim()
    }

    fn value(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<f64> {
        Ok(0.5 * p.dot(&self.metric.solve(y, p)?))
    }

    fn grad_y(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<DVector<f64>> {
        if self.metric.is_constant() {
            return Ok(DVector::zeros(y.len()));
        }
        numdiff::gradient(|yy| self.value(yy, p), y, GRAD_STEP)
    }

    fn grad_p(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<DVector<f64>> {
        self.metric.solve(y, p)
    }
}

/// Hamilton's equations: `(dy/ds, dp/ds) = (∂H/∂p, −∂H/∂y)`.
pub fn hamiltonian_field<H: Hamiltonian + ?Sized>(
    h: &H,
    pt: &PhasePoint,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let dy = h.grad_p(&pt.y, &pt.p)?;
    let dp = -h.grad_y(&pt.y, &pt.p)?;
    Ok((dy, dp))
}

/// One leapfrog step:
///
/// ```text
/// p½ = p − (h/2) ∂_yH(y, p)
/// y' = y + h ∂_pH(y, p½)
/// p' = p½ − (h/2) ∂_yH(y', p½)
/// ```
///
/// Symplectic and reversible when `H` is separable; for position-dependent
/// metrics it is the same explicit staging, which is only approximately so.
pub fn leapfrog_step<H: Hamiltonian + ?Sized>(h: &H, pt: &PhasePoint, step: f64) -> Result<PhasePoint> {
    if step == 0.0 || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("leapfrog step {step} must be finite and non-zero")));
    }
    if pt.dim() != h.dim() {
        return Err(Error::Dimension(format!(
            "phase point has dim {}, Hamiltonian {}",
            pt.dim(),
            h.dim()
        )));
    }
    let half = 0.5 * step;
    let p_half = &pt.p - h.grad_y(&pt.y, &pt.p)? * half;
    let y_next = &pt.y + h.grad_p(&pt.y, &p_half)? * step;
    let p_next = &p_half - h.grad_y(&y_next, &p_half)? * half;
    Ok(PhasePoint { y: y_next, p: p_next })
}

/// `n` leapfrog steps from `start`, recording all `n + 1` points.
pub fn integrate<H: Hamiltonian + ?Sized>(
    h: &H,
    start: &PhasePoint,
    step: f64,
    n: usize,
) -> Result<PhaseTrajectory> {
    if n == 0 {
        return Err(Error::InvalidArgument("integrate needs at least one step".into()));
    }
    let mut points = Vec::with_capacity(n + 1);
    points.push(start.clone());
    for k in 0..n {
        let next = leapfrog_step(h, &points[k], step).map_err(|e| Error::at_step(k, e))?;
        points.push(next);
    }
    PhaseTrajectory::new(points, step)
}
