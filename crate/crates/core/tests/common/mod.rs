#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinflow::manifold::{Decoder, Hamiltonian, Layer, MetricField};
use spinflow::planner::WeightedDigraph;
use spinflow::spin::{Spin, SpinSystem};
use spinflow::Result;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.gen_range(-scale..scale))
}

pub fn uniform_vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.gen_range(-scale..scale))
}

/// Two-layer tanh decoder `R² → R³` with random weights.
pub fn curved_decoder(seed: u64) -> Decoder {
    let mut r = rng(seed);
    let l1 = Layer::new(uniform_matrix(&mut r, 4, 2, 1.0), uniform_vector(&mut r, 4, 0.5)).unwrap();
    let l2 = Layer::new(uniform_matrix(&mut r, 3, 4, 1.0), uniform_vector(&mut r, 3, 0.5)).unwrap();
    Decoder::mlp_tanh(vec![l1, l2]).unwrap()
}

/// Two-layer tanh decoder `R² → R³` whose first layer works in the near-linear
/// part of `tanh`, so the metric bends gently and stays well conditioned.
pub fn mild_mlp_decoder(seed: u64) -> Decoder {
    const GAIN: f64 = 0.3;
    let mut r = rng(seed);
    let embed = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    let w1 = (embed + uniform_matrix(&mut r, 3, 2, 0.3)) * GAIN;
    let l1 = Layer::new(w1, uniform_vector(&mut r, 3, 0.1 * GAIN)).unwrap();
    let w2 = (DMatrix::identity(3, 3) + uniform_matrix(&mut r, 3, 3, 0.3)) * GAIN;
    let l2 = Layer::new(w2, uniform_vector(&mut r, 3, 0.1 * GAIN)).unwrap();
    Decoder::mlp_tanh(vec![l1, l2]).unwrap()
}

/// Curved metric that stays well conditioned: a tanh decoder stacked on the identity.
pub fn curved_metric(seed: u64) -> MetricField {
    let mut r = rng(seed);
    let w1 = uniform_matrix(&mut r, 3, 2, 1.0);
    let b1 = uniform_vector(&mut r, 3, 0.3);
    let w2 = uniform_matrix(&mut r, 2, 3, 0.5);
    let inner = Decoder::mlp_tanh(vec![Layer::new(w1, b1).unwrap()]).unwrap();
    let map = move |y: &DVector<f64>| {
        let bent = &w2 * inner.eval(y).expect("fixed-size input");
        DVector::from_iterator(4, y.iter().copied().chain(bent.iter().copied()))
    };
    MetricField::new(Decoder::custom(2, 4, map).unwrap())
}

pub fn random_spins(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Spin> {
    (0..n)
        .map(|_| loop {
            let x = uniform_vector(rng, d, 1.0);
            if x.norm() > 0.1 {
                break Spin::normalize(x).unwrap();
            }
        })
        .collect()
}

pub fn random_system(rng: &mut ChaCha8Rng, n: usize, d: usize) -> SpinSystem {
    let spins = random_spins(rng, n, d);
    let j = uniform_matrix(rng, n, n, 1.0);
    let fields = (0..n).map(|_| uniform_vector(rng, d, 0.5)).collect();
    SpinSystem::new(spins, j).unwrap().with_fields(fields).unwrap()
}

pub fn softmax(xs: &[f64]) -> Vec<f64> {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = xs.iter().map(|x| (x - m).exp()).collect();
    let z: f64 = e.iter().sum();
    e.iter().map(|x| x / z).collect()
}

/// Separable `H = ½‖p‖² + Σ (y⁴/4 + cos y)` with analytic gradients.
pub struct Anharmonic {
    pub dim: usize,
}

impl Hamiltonian for Anharmonic {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, y: &DVector<f64>, p: &DVector<f64>) -> Result<f64> {
        Ok(0.5 * p.norm_squared() + y.iter().map(|x| x.powi(4) / 4.0 + x.cos()).sum::<f64>())
    }
    fn grad_y(&self, y: &DVector<f64>, _p: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(y.map(|x| x.powi(3) - x.sin()))
    }
    fn grad_p(&self, _y: &DVector<f64>, p: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(p.clone())
    }
}

/// Shortest distances by enumerating every simple path from `src`.
pub fn brute_force_distances<P>(g: &WeightedDigraph<P>, src: usize) -> Vec<f64> {
    fn walk<P>(g: &WeightedDigraph<P>, u: usize, cost: f64, seen: &mut Vec<bool>, best: &mut Vec<f64>) {
        if cost < best[u] {
            best[u] = cost;
        }
        for &(v, w) in g.out_edges(u) {
            if !seen[v] {
                seen[v] = true;
                walk(g, v, cost + w, seen, best);
                seen[v] = false;
            }
        }
    }
    let mut best = vec![f64::INFINITY; g.len()];
    let mut seen = vec![false; g.len()];
    seen[src] = true;
    walk(g, src, 0.0, &mut seen, &mut best);
    best
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, max_edges: usize) -> WeightedDigraph {
    let n = rng.gen_range(1..=max_nodes);
    let m = rng.gen_range(0..=max_edges);
    let mut g = WeightedDigraph::with_nodes(n);
    for _ in 0..m {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        // Small integer weights make ties common.
        let w = f64::from(rng.gen_range(0..6u8)) * 0.5;
        g.add_edge(a, b, w).unwrap();
    }
    g
}

/// Determinant of the step map's Jacobian by central differences.
pub fn step_map_determinant<F>(f: F, z: &DVector<f64>, eps: f64) -> f64
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let n = z.len();
    let mut jac = DMatrix::zeros(n, n);
    for c in 0..n {
        let mut zp = z.clone();
        let mut zm = z.clone();
        zp[c] += eps;
        zm[c] -= eps;
        jac.set_column(c, &((f(&zp) - f(&zm)) / (2.0 * eps)));
    }
    jac.determinant()
}
