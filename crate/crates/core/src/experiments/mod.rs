//! The three toy experiments.
//!
//! - Planning on a 1D latent line with `V(y) = ½y²`: a linear path, a
//!   halving path, and the shortest path on a sampled state graph.
//! - Halving steps against slower CTM-style ticks that reach further.
//! - A harmonic oscillator under leapfrog, forward Euler, and damped leapfrog.
//!
//! Costs are trapezoid sums `Σ ½(V(y_t) + V(y_{t+1}))`; uncertainty is the
//! entropy of a small fixed decoder over three outcomes.

mod oscillator;
mod tables;

pub use oscillator::{run_variant, toy3_run, OscillatorReport, OscillatorVariant, Toy3Config};
pub use tables::{table1, table2, table3, Table};

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

use crate::info_phase::{entropy, softmax, PhasePortrait};
use crate::planner::{build_ndm_graph, shortest_path, trapezoid_cost, Connect, PathResult};
use crate::{Error, Result};

/// Maps a latent scalar to logits over `k` outcomes.
#[derive(Clone)]
pub struct ToyDecoder {
    name: String,
    k: usize,
    logit_map: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
}

impl fmt::Debug for ToyDecoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ToyDecoder").field("name", &self.name).field("k", &self.k).finish()
    }
}

/// Logit offset and slope of [`ToyDecoder::peaked`].
pub const PEAKED_OFFSET: f64 = 1.25;
pub const PEAKED_SLOPE: f64 = 0.4;

impl ToyDecoder {
    pub fn new<F>(name: &str, k: usize, logit_map: F) -> Result<ToyDecoder>
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        if k == 0 {
            return Err(Error::InvalidArgument("decoder needs at least one outcome".into()));
        }
        Ok(ToyDecoder { name: name.into(), k, logit_map: Arc::new(logit_map) })
    }

    /// Logits `(c − s|y|, 0, 0)`: one outcome dominates near the origin and
    /// loses its lead as `|y|` grows, so entropy rises with `|y|` up to
    /// `|y| = c/s`. The default.
    pub fn peaked() -> ToyDecoder {
        ToyDecoder::new("peaked", 3, |y| vec![PEAKED_OFFSET - PEAKED_SLOPE * y.abs(), 0.0, 0.0]).unwrap()
    }

    /// Logits `(a·y, 0, −a·y)`: uniform at the origin, sharpening with `|y|`.
    pub fn symmetric(a: f64) -> ToyDecoder {
        ToyDecoder::new("symmetric", 3, move |y| vec![a * y, 0.0, -a * y]).unwrap()
    }

    pub fn by_name(name: &str) -> Result<ToyDecoder> {
        match name {
            "peaked" => Ok(ToyDecoder::peaked()),
            "symmetric" => Ok(ToyDecoder::symmetric(1.0)),
            _ => Err(Error::InvalidArgument(format!("unknown decoder {name:?}; expected peaked or symmetric"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn outcomes(&self) -> usize {
        self.k
    }

    pub fn distribution(&self, y: f64) -> Result<Vec<f64>> {
        let logits = (self.logit_map)(y);
        if logits.len() != self.k {
            return Err(Error::Dimension(format!("decoder produced {} logits, expected {}", logits.len(), self.k)));
        }
        if logits.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite logits at y = {y}")));
        }
        Ok(softmax(&logits))
    }

    pub fn entropy(&self, y: f64) -> Result<f64> {
        entropy(&self.distribution(y)?)
    }
}

impl Default for ToyDecoder {
    fn default() -> Self {
        ToyDecoder::peaked()
    }
}

/// `V(y) = ½y²`.
pub fn toy_value(y: f64) -> f64 {
    0.5 * y * y
}

/// Trapezoid cost `Σ ½(V(y_t) + V(y_{t+1}))`.
pub fn trapezoid_path_cost<V: Fn(f64) -> f64>(path: &[f64], value: V) -> f64 {
    path.windows(2).map(|w| 0.5 * (value(w[0]) + value(w[1]))).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathMetrics {
    pub path: Vec<f64>,
    /// Entropy at every node.
    pub u: Vec<f64>,
    pub u_final: f64,
    pub delta_u: f64,
    pub cost: f64,
    pub efficiency: f64,
}

impl PathMetrics {
    /// Unsmoothed information-phase portrait of the path.
    pub fn portrait(&self) -> Result<PhasePortrait> {
        PhasePortrait::from_entropies(&self.u, 1)
    }
}

pub fn path_metrics<V: Fn(f64) -> f64>(path: &[f64], decoder: &ToyDecoder, value: V) -> Result<PathMetrics> {
    if path.len() < 2 {
        return Err(Error::InvalidArgument(format!("path needs at least 2 nodes, got {}", path.len())));
    }
    let u = path.iter().map(|&y| decoder.entropy(y)).collect::<Result<Vec<_>>>()?;
    let cost = trapezoid_path_cost(path, value);
    if cost == 0.0 {
        return Err(Error::InvalidArgument("path cost is zero; efficiency undefined".into()));
    }
    let u_final = u[u.len() - 1];
    let delta_u = u[0] - u_final;
    Ok(PathMetrics { path: path.to_vec(), u, u_final, delta_u, cost, efficiency: delta_u / cost })
}

/// Latent samples of the planning graph: the linear and halving path nodes.
pub const TOY1_SAMPLES: [f64; 11] = [2.0, 1.6, 1.2, 0.8, 0.4, 0.0, 1.0, 0.5, 0.25, 0.125, 0.0625];

pub fn linear_path() -> Vec<f64> {
    (0..=5).map(|k| f64::from(20 - 4 * k) / 10.0).collect()
}

pub fn geometric_path(start: f64, ratio: f64, steps: usize) -> Vec<f64> {
    std::iter::successors(Some(start), |y| Some(y * ratio)).take(steps + 1).collect()
}

/// Shortest path from 2.0 to 0.0 on the complete graph over [`TOY1_SAMPLES`]
/// with trapezoid edge costs.
pub fn sssp_path() -> Result<(Vec<f64>, f64)> {
    let samples: Vec<DVector<f64>> = TOY1_SAMPLES.iter().map(|&y| DVector::from_element(1, y)).collect();
    let g = build_ndm_graph(&samples, Connect::Complete, trapezoid_cost(|y: &DVector<f64>| toy_value(y[0])))?;
    match shortest_path(&g, 0, 5)? {
        PathResult::Found { nodes, cost } => Ok((nodes.iter().map(|&k| g.payload(k)[0]).collect(), cost)),
        PathResult::Unreachable => Err(Error::DegenerateSystem("target unreachable on the state graph".into())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Toy1 {
    pub linear: PathMetrics,
    pub hjb_like: PathMetrics,
    pub ndm_sssp: PathMetrics,
}

pub fn toy1_run(decoder: &ToyDecoder) -> Result<Toy1> {
    let (sssp, _) = sssp_path()?;
    Ok(Toy1 {
        linear: path_metrics(&linear_path(), decoder, toy_value)?,
        hjb_like: path_metrics(&geometric_path(2.0, 0.5, 5), decoder, toy_value)?,
        ndm_sssp: path_metrics(&sssp, decoder, toy_value)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Toy2 {
    pub hjb_only: PathMetrics,
    pub ctm_style: PathMetrics,
}

pub fn toy2_run(decoder: &ToyDecoder) -> Result<Toy2> {
    Ok(Toy2 {
        hjb_only: path_metrics(&geometric_path(2.0, 0.5, 3), decoder, toy_value)?,
        ctm_style: path_metrics(&geometric_path(2.0, 0.6, 6), decoder, toy_value)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoders_stay_in_range() {
        for dec in [ToyDecoder::peaked(), ToyDecoder::symmetric(1.0)] {
            for k in -40..=40 {
                let u = dec.entropy(k as f64 * 0.1).unwrap();
                assert!((0.0..=3f64.ln() + 1e-15).contains(&u));
            }
        }
    }

    #[test]
    fn peaked_entropy_rises_with_distance() {
        let dec = ToyDecoder::peaked();
        let mut prev = dec.entropy(0.0).unwrap();
        for k in 1..=200 {
            let u = dec.entropy(k as f64 * 0.01).unwrap();
            assert!(u > prev);
            prev = u;
        }
    }

    #[test]
    fn path_metric_examples() {
        let dec = ToyDecoder::peaked();
        let m = path_metrics(&[2.0, 0.0], &dec, toy_value).unwrap();
        assert_eq!(m.cost, 1.0);
        assert_eq!(m.delta_u, dec.entropy(2.0).unwrap() - dec.entropy(0.0).unwrap());
        assert!((m.efficiency * m.cost - m.delta_u).abs() < 1e-12);
        assert!(path_metrics(&[0.0, 0.0], &dec, toy_value).is_err());
        assert!(path_metrics(&[1.0], &dec, toy_value).is_err());
    }

    #[test]
    fn paths() {
        assert_eq!(linear_path(), vec![2.0, 1.6, 1.2, 0.8, 0.4, 0.0]);
        assert_eq!(geometric_path(2.0, 0.5, 5), vec![2.0, 1.0, 0.5, 0.25, 0.125, 0.0625]);
        let (p, c) = sssp_path().unwrap();
        assert_eq!(p, vec![2.0, 0.0]);
        assert_eq!(c, 1.0);
    }

    #[test]
    fn costs_by_hand() {
        // 1.64 + 1.0 + 0.52 + 0.2 + 0.04
        assert!((trapezoid_path_cost(&linear_path(), toy_value) - 3.4).abs() < 1e-12);
        // 1.25 + 0.3125 + 0.078125
        assert_eq!(trapezoid_path_cost(&geometric_path(2.0, 0.5, 3), toy_value), 1.640625);
    }
}
