//! Harmonic oscillator `H = ½(y² + p²)` from `(1, 0)`.

use nalgebra::DVector;

use crate::manifold::{integrate, Oscillator, PhasePoint};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscillatorVariant {
    Leapfrog,
    Euler,
    DampedLeapfrog,
}

impl OscillatorVariant {
    pub fn label(self) -> &'static str {
        match self {
            OscillatorVariant::Leapfrog => "leapfrog-hamiltonian",
            OscillatorVariant::Euler => "euler-hamiltonian",
            OscillatorVariant::DampedLeapfrog => "leapfrog-damped",
        }
    }

    pub fn symplectic(self) -> bool {
        !matches!(self, OscillatorVariant::Euler)
    }

    pub fn hamiltonian(self) -> bool {
        !matches!(self, OscillatorVariant::DampedLeapfrog)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Toy3Config {
    pub horizon: f64,
    pub step: f64,
    pub damping: f64,
}

impl Default for Toy3Config {
    fn default() -> Self {
        Toy3Config { horizon: 100.0, step: 0.1, damping: 0.05 }
    }
}

impl Toy3Config {
    pub fn steps(&self) -> usize {
        (self.horizon / self.step).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !(self.horizon > 0.0) || !self.step.is_finite() || !self.horizon.is_finite() {
            return Err(Error::InvalidArgument(format!("horizon {} and step {} must be positive", self.horizon, self.step)));
        }
        if !(self.damping >= 0.0) {
            return Err(Error::InvalidArgument(format!("damping {} must be >= 0", self.damping)));
        }
        if self.steps() == 0 {
            return Err(Error::InvalidArgument("horizon shorter than one step".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorReport {
    pub variant: OscillatorVariant,
    pub final_state: (f64, f64),
    /// Distance to the exact state `(cos T, −sin T)`.
    pub eps_state: f64,
    /// `max_k |H(y_k, p_k) − ½|`, including the initial state.
    pub eps_h_max: f64,
    pub steps: usize,
}

fn energy(y: f64, p: f64) -> f64 {
    0.5 * (y * y + p * p)
}

fn report(variant: OscillatorVariant, states: &[(f64, f64)], horizon: f64) -> OscillatorReport {
    let (y, p) = states[states.len() - 1];
    let eps_state = (y - horizon.cos()).hypot(p + horizon.sin());
    let eps_h_max = states.iter().map(|&(y, p)| (energy(y, p) - 0.5).abs()).fold(0.0, f64::max);
    OscillatorReport { variant, final_state: (y, p), eps_state, eps_h_max, steps: states.len() - 1 }
}

fn leapfrog_states(h: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let start = PhasePoint::new(DVector::from_element(1, 1.0), DVector::from_element(1, 0.0))?;
    let traj = integrate(&Oscillator { dim: 1 }, &start, h, n)?;
    Ok(traj.points().iter().map(|pt| (pt.y[0], pt.p[0])).collect())
}

fn euler_states(h: f64, n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n + 1);
    let (mut y, mut p) = (1.0, 0.0);
    out.push((y, p));
    for _ in 0..n {
        (y, p) = (y + h * p, p - h * y);
        out.push((y, p));
    }
    out
}

/// Leapfrog staging with the damping force evaluated at the current momentum:
/// `p½ = p − (h/2)(y + λp)`, `y' = y + h p½`, `p' = p½ − (h/2)(y' + λp½)`.
fn damped_states(h: f64, n: usize, lambda: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n + 1);
    let (mut y, mut p) = (1.0, 0.0);
    out.push((y, p));
    for _ in 0..n {
        let half = p - 0.5 * h * (y + lambda * p);
        y += h * half;
        p = half - 0.5 * h * (y + lambda * half);
        out.push((y, p));
    }
    out
}

pub fn run_variant(variant: OscillatorVariant, cfg: &Toy3Config) -> Result<OscillatorReport> {
    cfg.validate()?;
    let n = cfg.steps();
    let states = match variant {
        OscillatorVariant::Leapfrog => leapfrog_states(cfg.step, n)?,
        OscillatorVariant::Euler => euler_states(cfg.step, n),
        OscillatorVariant::DampedLeapfrog => damped_states(cfg.step, n, cfg.damping),
    };
    Ok(report(variant, &states, n as f64 * cfg.step))
}

/// Leapfrog, Euler and damped-leapfrog reports, in that order.
pub fn toy3_run(cfg: &Toy3Config) -> Result<[OscillatorReport; 3]> {
    Ok([
        run_variant(OscillatorVariant::Leapfrog, cfg)?,
        run_variant(OscillatorVariant::Euler, cfg)?,
        run_variant(OscillatorVariant::DampedLeapfrog, cfg)?,
    ])
}
