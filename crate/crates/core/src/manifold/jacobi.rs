//! Variational (Jacobi) dynamics along phase-space trajectories.

use nalgebra::{DMatrix, DVector};

use super::{integrate, Hamiltonian, PhasePoint, PhaseTrajectory};
use crate::numdiff::{scaled_step, HESS_STEP};
use crate::{Error, Result};

fn stacked_gradient<H: Hamiltonian + ?Sized>(h: &H, z: &DVector<f64>) -> Result<DVector<f64>> {
    let pt = PhasePoint::from_stacked(z);
    let gy = h.grad_y(&pt.y, &pt.p)?;
    let gp = h.grad_p(&pt.y, &pt.p)?;
    Ok(DVector::from_iterator(z.len(), gy.iter().chain(gp.iter()).copied()))
}

/// `DF = J ∇²H` with `J = [[0, I], [−I, 0]]`.
///
/// The Hessian is taken by central differences of the gradient.
pub fn variational_matrix<H: Hamiltonian + ?Sized>(h: &H, pt: &PhasePoint) -> Result<DMatrix<f64>> {
    let d = pt.dim();
    let z = pt.stacked();
    let step = scaled_step(HESS_STEP, &z);
    let mut hess = DMatrix::zeros(2 * d, 2 * d);
    let mut zp = z.clone();
    for c in 0..2 * d {
        let zc = z[c];
        zp[c] = zc + step;
        let gp = stacked_gradient(h, &zp)?;
        zp[c] = zc - step;
        let gm = stacked_gradient(h, &zp)?;
        zp[c] = zc;
        hess.set_column(c, &((gp - gm) / (2.0 * step)));
    }
    let mut df = DMatrix::zeros(2 * d, 2 * d);
    // Top block rows: +∂²H/∂p∂z.  Bottom block rows: −∂²H/∂y∂z.
    df.rows_mut(0, d).copy_from(&hess.rows(d, d));
    df.rows_mut(d, d).copy_from(&(-hess.rows(0, d)));
    Ok(df)
}

/// Integrates `dδ/ds = DF(y(s), p(s)) δ` along `traj`, returning `δ` at every node.
///
/// Each interval uses RK2 with `DF` frozen at the average of its two end nodes.
pub fn jacobi_propagate<H: Hamiltonian + ?Sized>(
    h: &H,
    traj: &PhaseTrajectory,
    delta0: &DVector<f64>,
) -> Result<Vec<DVector<f64>>> {
    let d = traj.points()[0].dim();
    if delta0.len() != 2 * d {
        return Err(Error::Dimension(format!(
            "deviation has dim {}, expected {}",
            delta0.len(),
            2 * d
        )));
    }
    let s = traj.step();
    let mut out = Vec::with_capacity(traj.len());
    out.push(delta0.clone());
    for (k, pair) in traj.points().windows(2).enumerate() {
        let mid = PhasePoint {
            y: (&pair[0].y + &pair[1].y) * 0.5,
            p: (&pair[0].p + &pair[1].p) * 0.5,
        };
        let a = variational_matrix(h, &mid).map_err(|e| Error::at_step(k, e))?;
        let cur = &out[k];
        let k1 = &a * cur;
        let k2 = &a * (cur + &k1 * (0.5 * s));
        out.push(cur + k2 * s);
    }
    Ok(out)
}

/// Deviation estimated from two integrated trajectories: start at `start` and
/// at `start + eps·δ0`, difference divided by `eps`.
pub fn finite_perturbation_deviation<H: Hamiltonian + ?Sized>(
    h: &H,
    start: &PhasePoint,
    delta0: &DVector<f64>,
    step: f64,
    n: usize,
    eps: f64,
) -> Result<Vec<DVector<f64>>> {
    let base = integrate(h, start, step, n)?;
    let shifted = PhasePoint::from_stacked(&(start.stacked() + delta0 * eps));
    let pert = integrate(h, &shifted, step, n)?;
    Ok(base
        .points()
        .iter()
        .zip(pert.points())
        .map(|(a, b)| (b.stacked() - a.stacked()) / eps)
        .collect())
}

/// A reference trajectory, initial deviation, and observed deviations at each node.
#[derive(Debug, Clone)]
pub struct JacobiCase {
    pub trajectory: PhaseTrajectory,
    pub delta0: DVector<f64>,
    pub empirical: Vec<DVector<f64>>,
}

/// Mean over cases and nodes of `‖δ_emp(s) − δ_model(s)‖²`.
pub fn loss_jac<H: Hamiltonian + ?Sized>(h: &H, cases: &[JacobiCase]) -> Result<f64> {
    if cases.is_empty() {
        return Err(Error::InvalidArgument("no Jacobi cases".into()));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for (c, case) in cases.iter().enumerate() {
        if case.empirical.len() != case.trajectory.len() {
            return Err(Error::Dimension(format!(
                "case {c}: {} empirical deviations for {} nodes",
                case.empirical.len(),
                case.trajectory.len()
            )));
        }
        let model = jacobi_propagate(h, &case.trajectory, &case.delta0)?;
        for (e, m) in case.empirical.iter().zip(&model) {
            total += (e - m).norm_squared();
            count += 1;
        }
    }
    Ok(total / count as f64)
}
