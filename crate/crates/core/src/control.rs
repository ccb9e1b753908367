//! HJB optimal control on the latent manifold.
//!
//! Controlled dynamics `ẏ = u` with running cost
//! `½‖u‖²_G + ℓ_task(z) + λ ℓ_WS(z, W)` (where `z = G_φ(y)`) give the
//! Pontryagin Hamiltonian, the optimal control `u* = G⁻¹p`, and the reduced
//! Hamiltonian `½ pᵀG⁻¹p − ℓ_task − λ ℓ_WS` whose leapfrog flow forms an NDM layer.
//!
//! Cost and value callables must be `Send + Sync`; everything here is a pure
//! function of its arguments.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

use crate::manifold::{leapfrog_step, Hamiltonian, MetricField, PhasePoint};
use crate::numdiff::{self, GRAD_STEP};
use crate::{Error, Result};

type AmbientCost = dyn Fn(&DVector<f64>) -> f64 + Send + Sync;
type WorkspaceCost<W> = dyn Fn(&DVector<f64>, &W) -> f64 + Send + Sync;

/// Running and terminal cost terms. `W` is the workspace state passed to `ℓ_WS`.
pub struct CostSpec<W: ?Sized = ()> {
    task: Arc<AmbientCost>,
    workspace: Option<Arc<WorkspaceCost<W>>>,
    lambda: f64,
    terminal: Arc<AmbientCost>,
}

impl<W: ?Sized> Clone for CostSpec<W> {
    fn clone(&self) -> Self {
        CostSpec {
            task: Arc::clone(&self.task),
            workspace: self.workspace.clone(),
            lambda: self.lambda,
            terminal: Arc::clone(&self.terminal),
        }
    }
}

impl<W: ?Sized> fmt::Debug for CostSpec<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CostSpec")
            .field("lambda", &self.lambda)
            .field("has_workspace_term", &self.workspace.is_some())
            .finish_non_exhaustive()
    }
}

impl<W: ?Sized> CostSpec<W> {
    /// Task cost only; no workspace term, zero terminal cost.
    pub fn new<F>(task: F) -> CostSpec<W>
    where
        F: Fn(&DVector<f64>) -> f64 + Send + Sync + 'static,
    {
        CostSpec {
            task: Arc::new(task),
            workspace: None,
            lambda: 0.0,
            terminal: Arc::new(|_| 0.0),
        }
    }

    /// All cost terms zero.
    pub fn zero() -> CostSpec<W> {
        CostSpec::new(|_| 0.0)
    }

    pub fn with_workspace<F>(mut self, lambda: f64, ws_cost: F) -> Result<CostSpec<W>>
    where
        F: Fn(&DVector<f64>, &W) -> f64 + Send + Sync + 'static,
    {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("workspace weight {lambda} must be >= 0")));
        }
        self.workspace = Some(Arc::new(ws_cost));
        self.lambda = lambda;
        Ok(self)
    }

    pub fn with_terminal<F>(mut self, terminal: F) -> CostSpec<W>
    where
        F: Fn(&DVector<f64>) -> f64 + Send + Sync + 'static,
    {
        self.terminal = Arc::new(terminal);
        self
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn task(&self, z: &DVector<f64>) -> f64 {
        (self.task)(z)
    }

    /// `λ ℓ_WS(z, W)`, zero when no workspace term is configured.
    pub fn weighted_workspace(&self, z: &DVector<f64>, ws: &W) -> f64 {
        match &self.workspace {
            Some(f) => self.lambda * f(z, ws),
            None => 0.0,
        }
    }

    pub fn terminal(&self, z: &DVector<f64>) -> f64 {
        (self.terminal)(z)
    }

    /// Checks that every cost term is finite and non-negative at the given
    /// ambient points. Signed costs are allowed for analytic test Hamiltonians
    /// but a genuine cost should pass this check.
    pub fn validate_on(&self, samples: &[DVector<f64>], ws: &W) -> Result<()> {
        for (i, z) in samples.iter().enumerate() {
            let terms = [
                ("task", self.task(z)),
                ("workspace", self.workspace.as_ref().map(|f| f(z, ws)).unwrap_or(0.0)),
                ("terminal", self.terminal(z)),
            ];
            for (name, v) in terms {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "{name} cost is {v} at sample {i}; costs must be finite and >= 0"
                    )));
                }
            }
        }
        Ok(())
    }

    fn state_cost(&self, mf: &MetricField, ws: &W, y: &DVector<f64>) -> Result<f64> {
        let z = mf.decoder().eval(y)?;
        Ok(self.task(&z) + self.weighted_workspace(&z, ws))
    }
}

/// `u* = G(y)⁻¹ p`, the maximiser of the Pontryagin Hamiltonian.
pub fn optimal_control(mf: &MetricField, y: &DVector<f64>, p: &DVector<f64>) -> Result<DVector<f64>> {
    mf.solve(y, p)
}

/// `H_ctrl(y, p, u) = pᵀu − ½ uᵀG(y)u − ℓ_task − λ ℓ_WS`.
pub fn pontryagin_hamiltonian<W: ?Sized>(
    mf: &MetricField,
    cost: &CostSpec<W>,
    ws: &W,
    y: &DVector<f64>,
    p: &DVector<f64>,
    u: &DVector<f64>,
) -> Result<f64> {
    let g = mf.metric(y)?;
    Ok(p.dot(u) - 0.5 * u.dot(&(g * u)) - cost.state_cost(mf, ws, y)?)
}

/// `H(y, p) = ½ pᵀG⁻¹p − ℓ_task(G_φ(y)) − λ ℓ_WS(G_φ(y), W)`.
pub fn reduced_hamiltonian<W: ?Sized>(
    mf: &MetricField,
    cost: &CostSpec<W>,
    ws: &W,
    y: &DVector<f64>,
    p: &DVector<f64>,
) -> Result<f64> {
    let kinetic = 0.5 * p.dot(&mf.solve(y, p)?);
    Ok(kinetic - cost.state_cost(mf, ws, y)?)
}

/// The reduced Hamiltonian as a [`Hamiltonian`] for the leapfrog integrator.
pub struct ReducedHamiltonian<'a, W: ?Sized> {
    pub metric: &'a MetricField,
    pub cost: &'a CostSpec<W>,
    pub workspace: &'a W,
}

impl<W: ?Sized> Hamiltonian for ReducedHamiltonian<'_, W> {
    fn dim(&self) -> usize {
        self.metric.dim()
    }

    fn value(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<f64> {
        reduced_hamiltonian(self.metric, self.cost, self.workspace, y, p)
    }

    fn grad_p(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<DVector<f64>> {
        self.metric.solve(y, p)
    }
}

type ScalarField = dyn Fn(&DVector<f64>, f64) -> f64 + Send + Sync;
type VectorField = dyn Fn(&DVector<f64>, f64) -> DVector<f64> + Send + Sync;

/// Value function `V(y, t)` with optional analytic derivatives; missing ones
/// fall back to central differences.
#[derive(Clone)]
pub struct ValueFunction {
    eval: Arc<ScalarField>,
    grad: Option<Arc<VectorField>>,
    time_partial: Option<Arc<ScalarField>>,
}

impl fmt::Debug for ValueFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValueFunction")
            .field("analytic_grad", &self.grad.is_some())
            .field("analytic_time_partial", &self.time_partial.is_some())
            .finish()
    }
}

impl ValueFunction {
    pub fn new<F>(eval: F) -> ValueFunction
    where
        F: Fn(&DVector<f64>, f64) -> f64 + Send + Sync + 'static,
    {
        ValueFunction { eval: Arc::new(eval), grad: None, time_partial: None }
    }

    pub fn with_grad<G>(mut self, grad: G) -> ValueFunction
    where
        G: Fn(&DVector<f64>, f64) -> DVector<f64> + Send + Sync + 'static,
    {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn with_time_partial<T>(mut self, dt: T) -> ValueFunction
    where
        T: Fn(&DVector<f64>, f64) -> f64 + Send + Sync + 'static,
    {
        self.time_partial = Some(Arc::new(dt));
        self
    }

    /// Time-independent `V(y) = ½‖y‖²` with analytic derivatives.
    pub fn half_square() -> ValueFunction {
        ValueFunction::new(|y, _| 0.5 * y.norm_squared())
            .with_grad(|y, _| y.clone())
            .with_time_partial(|_, _| 0.0)
    }

    pub fn value(&self, y: &DVector<f64>, t: f64) -> f64 {
        (self.eval)(y, t)
    }

    pub fn gradient(&self, y: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
        match &self.grad {
            Some(g) => Ok(g(y, t)),
            None => self.fd_gradient(y, t),
        }
    }

    pub fn time_derivative(&self, y: &DVector<f64>, t: f64) -> f64 {
        match &self.time_partial {
            Some(f) => f(y, t),
            None => {
                let h = GRAD_STEP * (1.0 + t.abs());
                (self.value(y, t + h) - self.value(y, t - h)) / (2.0 * h)
            }
        }
    }

    fn fd_gradient(&self, y: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
        numdiff::gradient(|yy| Ok(self.value(yy, t)), y, GRAD_STEP)
    }

    /// Relative mismatch between the configured gradient and central differences.
    pub fn gradient_error(&self, y: &DVector<f64>, t: f64) -> Result<f64> {
        let g = self.gradient(y, t)?;
        let fd = self.fd_gradient(y, t)?;
        Ok((&g - &fd).norm() / fd.norm().max(1.0))
    }
}

/// `∂_tV(y, t) + H(y, ∇_yV(y, t))`; zero exactly when `V` solves the HJB equation at `(y, t)`.
pub fn hjb_residual<W: ?Sized>(
    mf: &MetricField,
    cost: &CostSpec<W>,
    ws: &W,
    value: &ValueFunction,
    y: &DVector<f64>,
    t: f64,
) -> Result<f64> {
    let p = value.gradient(y, t)?;
    Ok(value.time_derivative(y, t) + reduced_hamiltonian(mf, cost, ws, y, &p)?)
}

/// One Hamiltonian NDM layer: a leapfrog step of the reduced Hamiltonian.
pub fn ndm_layer<W: ?Sized>(
    mf: &MetricField,
    cost: &CostSpec<W>,
    ws: &W,
    pt: &PhasePoint,
    dt: f64,
) -> Result<PhasePoint> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("layer step {dt} must be positive")));
    }
    let h = ReducedHamiltonian { metric: mf, cost, workspace: ws };
    leapfrog_step(&h, pt, dt)
}

/// `½ uᵀG(y)u + ℓ_task(z) + λ ℓ_WS(z, W)` with `z = G_φ(y)`.
pub fn running_cost<W: ?Sized>(
    mf: &MetricField,
    cost: &CostSpec<W>,
    ws: &W,
    y: &DVector<f64>,
    u: &DVector<f64>,
) -> Result<f64> {
    let g = mf.metric(y)?;
    Ok(0.5 * u.dot(&(g * u)) + cost.state_cost(mf, ws, y)?)
}

/// Node of a discretised control trajectory. The control `u` and duration `dt`
/// describe the segment leaving this node; they are ignored on the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlNode {
    pub y: DVector<f64>,
    pub u: DVector<f64>,
    pub dt: f64,
}

impl ControlNode {
    pub fn new(y: DVector<f64>, u: DVector<f64>, dt: f64) -> ControlNode {
        ControlNode { y, u, dt }
    }
}

/// Discretised `J[u]`: trapezoid of the running cost over each segment plus
/// the terminal cost at the last node.
pub fn trajectory_cost<W: ?Sized>(
    mf: &MetricField,
    cost: &CostSpec<W>,
    ws: &W,
    nodes: &[ControlNode],
) -> Result<f64> {
    let last = nodes
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty control trajectory".into()))?;
    let mut total = 0.0;
    for (k, seg) in nodes.windows(2).enumerate() {
        let (a, b) = (&seg[0], &seg[1]);
        if !(a.dt >= 0.0) {
            return Err(Error::InvalidArgument(format!("segment {k} has negative duration")));
        }
        let ca = running_cost(mf, cost, ws, &a.y, &a.u)?;
        let cb = running_cost(mf, cost, ws, &b.y, &a.u)?;
        total += a.dt * 0.5 * (ca + cb);
    }
    let z = mf.decoder().eval(&last.y)?;
    Ok(total + cost.terminal(&z))
}
