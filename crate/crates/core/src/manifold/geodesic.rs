//! Geodesic shooting on the pullback metric.

use nalgebra::{DMatrix, DVector};

use super::{integrate, GeodesicHamiltonian, MetricField, PhasePoint};
use crate::numdiff::{self, GRAD_STEP};
use crate::{Error, Result};

/// Endpoint `y(1; y_a, p)` of `K` leapfrog steps of size `1/K`.
pub fn shoot_geodesic(
    mf: &MetricField,
    y_a: &DVector<f64>,
    p_eta: &DVector<f64>,
    substeps: usize,
) -> Result<DVector<f64>> {
    if substeps == 0 {
        return Err(Error::InvalidArgument("shooting needs at least one substep".into()));
    }
    let h = GeodesicHamiltonian::new(mf);
    let start = PhasePoint::new(y_a.clone(), p_eta.clone())?;
    let traj = integrate(&h, &start, 1.0 / substeps as f64, substeps)?;
    Ok(traj.last().y.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingSolution {
    pub momentum: DVector<f64>,
    /// `‖y(1) − y_b‖` at `momentum`.
    pub residual: f64,
    /// Number of residual evaluations of the outer loop, including the one that converged.
    pub iterations: usize,
}

/// Finds `p` with `‖shoot_geodesic(y_a, p) − y_b‖ ≤ tol`.
///
/// Damped Gauss–Newton: the shooting map's Jacobian is taken by central
/// differences, the step solves `(JᵀJ + μI)Δ = −Jᵀr`, and `μ` is halved after
/// every accepted step and quadrupled after a rejected one. The initial guess is
/// the metric-weighted chord `G(y_a)(y_b − y_a)`.
pub fn solve_shooting(
    mf: &MetricField,
    y_a: &DVector<f64>,
    y_b: &DVector<f64>,
    substeps: usize,
    tol: f64,
    max_iter: usize,
) -> Result<ShootingSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if y_a.len() != mf.dim() || y_b.len() != mf.dim() {
        return Err(Error::Dimension("endpoints do not match metric dimension".into()));
    }
    let residual_at = |p: &DVector<f64>| -> Result<DVector<f64>> {
        Ok(shoot_geodesic(mf, y_a, p, substeps)? - y_b)
    };

    let mut p = mf.metric(y_a)? * (y_b - y_a);
    let mut r = residual_at(&p)?;
    let mut mu: Option<f64> = None;
    for iter in 1..=max_iter {
        let norm = r.norm();
        if norm <= tol {
            return Ok(ShootingSolution { momentum: p, residual: norm, iterations: iter });
        }
        if iter == max_iter {
            break;
        }
        let jac = numdiff::jacobian(|q| residual_at(q), &p, GRAD_STEP)?;
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;
        let scale = jtj.trace() / jtj.nrows() as f64;
        let mut damping = mu.unwrap_or(1e-6 * scale);
        let mut accepted = false;
        for _ in 0..40 {
            let lhs = &jtj + DMatrix::identity(jtj.nrows(), jtj.ncols()) * damping;
            let Some(delta) = lhs.lu().solve(&(-&jtr)) else {
                damping *= 4.0;
                continue;
            };
            let trial = &p + delta;
            if let Ok(r_trial) = residual_at(&trial) {
                if r_trial.norm() < norm {
                    p = trial;
                    r = r_trial;
                    damping *= 0.5;
                    accepted = true;
                    break;
                }
            }
            damping *= 4.0;
        }
        mu = Some(damping);
        if !accepted {
            return Err(Error::Convergence { iterations: iter, residual: norm });
        }
    }
    Err(Error::Convergence { iterations: max_iter, residual: r.norm() })
}

/// Riemannian distance between `y_a` and `y_b` by shooting: the geodesic has
/// constant speed `√(pᵀG⁻¹p)` over unit time.
pub fn geodesic_distance(
    mf: &MetricField,
    y_a: &DVector<f64>,
    y_b: &DVector<f64>,
    substeps: usize,
    tol: f64,
) -> Result<f64> {
    let sol = solve_shooting(mf, y_a, y_b, substeps, tol, 50)?;
    let v = mf.solve(y_a, &sol.momentum)?;
    Ok(sol.momentum.dot(&v).max(0.0).sqrt())
}

/// `(y_a, y_b, p_η)` for the geodesic consistency loss.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPair {
    pub start: DVector<f64>,
    pub end: DVector<f64>,
    pub momentum: DVector<f64>,
}

/// Mean squared endpoint error `‖y(1; y_a, p_η) − y_b‖²` over the pairs.
pub fn loss_geo(mf: &MetricField, pairs: &[GeodesicPair], substeps: usize) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("no geodesic pairs".into()));
    }
    let mut total = 0.0;
    for pair in pairs {
        let end = shoot_geodesic(mf, &pair.start, &pair.momentum, substeps)?;
        total += (end - &pair.end).norm_squared();
    }
    Ok(total / pairs.len() as f64)
}
