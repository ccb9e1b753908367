//! Weighted digraphs, Dijkstra, and latent state graphs.
//!
//! Edge weights are finite and non-negative; this is checked when an edge is
//! added, so every [`WeightedDigraph`] is a valid Dijkstra input.

mod format;

pub use format::{read_graph, sssp_csv, write_graph};

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::DVector;

use crate::{Error, Result};

/// Directed graph with a payload per node and non-negative edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph<P = ()> {
    payloads: Vec<P>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl WeightedDigraph<()> {
    pub fn with_nodes(n: usize) -> WeightedDigraph<()> {
        WeightedDigraph::new(vec![(); n])
    }
}

impl<P> WeightedDigraph<P> {
    pub fn new(payloads: Vec<P>) -> WeightedDigraph<P> {
        let adjacency = payloads.iter().map(|_| Vec::new()).collect();
        WeightedDigraph { payloads, adjacency }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: f64) -> Result<()> {
        let n = self.len();
        for idx in [from, to] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, len: n });
            }
        }
        if !(weight >= 0.0) || !weight.is_finite() {
            return Err(Error::InvalidWeight { from, to, weight });
        }
        self.adjacency[from].push((to, weight));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.payloads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payloads.is_empty()
    }

    pub fn payload(&self, i: usize) -> &P {
        &self.payloads[i]
    }

    pub fn payloads(&self) -> &[P] {
        &self.payloads
    }

    pub fn out_edges(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    /// All edges as `(from, to, weight)` in insertion order per source.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, out)| out.iter().map(move |&(v, w)| (u, v, w)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Smallest weight among parallel edges `from -> to`.
    pub fn weight(&self, from: usize, to: usize) -> Option<f64> {
        self.adjacency[from]
            .iter()
            .filter(|e| e.0 == to)
            .map(|e| e.1)
            .min_by(f64::total_cmp)
    }
}

/// Shortest distances and predecessors from one source.
#[derive(Debug, Clone, PartialEq)]
pub struct SsspResult {
    pub source: usize,
    /// `f64::INFINITY` for unreachable nodes.
    pub dist: Vec<f64>,
    /// `None` for the source and unreachable nodes.
    pub pred: Vec<Option<usize>>,
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    // Min-heap on distance, then node index.
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Binary-heap Dijkstra. Among equal-cost routes the predecessor with the
/// smaller index wins.
pub fn dijkstra<P>(g: &WeightedDigraph<P>, src: usize) -> Result<SsspResult> {
    let n = g.len();
    if src >= n {
        return Err(Error::IndexOutOfRange { index: src, len: n });
    }
    if let Some((u, v, w)) = g.edges().find(|e| !(e.2 >= 0.0) || !e.2.is_finite()) {
        return Err(Error::InvalidWeight { from: u, to: v, weight: w });
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Entry(0.0, src));
    while let Some(Entry(d, u)) = heap.pop() {
        if settled[u] || d > dist[u] {
            continue;
        }
        settled[u] = true;
        for &(v, w) in g.out_edges(u) {
            if settled[v] {
                continue;
            }
            let cand = d + w;
            if cand < dist[v] {
                dist[v] = cand;
                pred[v] = Some(u);
                heap.push(Entry(cand, v));
            } else if cand == dist[v] && pred[v].is_some_and(|p| u < p) {
                pred[v] = Some(u);
            }
        }
    }
    Ok(SsspResult { source: src, dist, pred })
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathResult {
    Found { nodes: Vec<usize>, cost: f64 },
    Unreachable,
}

impl PathResult {
    pub fn cost(&self) -> Option<f64> {
        match self {
            PathResult::Found { cost, .. } => Some(*cost),
            PathResult::Unreachable => None,
        }
    }

    pub fn nodes(&self) -> Option<&[usize]> {
        match self {
            PathResult::Found { nodes, .. } => Some(nodes),
            PathResult::Unreachable => None,
        }
    }
}

impl SsspResult {
    /// Walks predecessors back from `dst`.
    pub fn path_to(&self, dst: usize) -> Result<PathResult> {
        let n = self.dist.len();
        if dst >= n {
            return Err(Error::IndexOutOfRange { index: dst, len: n });
        }
        if self.dist[dst].is_infinite() {
            return Ok(PathResult::Unreachable);
        }
        let mut nodes = vec![dst];
        let mut cur = dst;
        while let Some(p) = self.pred[cur] {
            nodes.push(p);
            cur = p;
        }
        nodes.reverse();
        Ok(PathResult::Found { nodes, cost: self.dist[dst] })
    }
}

pub fn shortest_path<P>(g: &WeightedDigraph<P>, src: usize, dst: usize) -> Result<PathResult> {
    if dst >= g.len() {
        return Err(Error::IndexOutOfRange { index: dst, len: g.len() });
    }
    dijkstra(g, src)?.path_to(dst)
}

/// Neighbourhood rule for [`build_ndm_graph`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Connect {
    /// Every ordered pair of distinct samples.
    Complete,
    /// Each sample to its `k` nearest others (ties by index), plus the reverse edges.
    KNearest(usize),
    /// Pairs within Euclidean distance `r` (inclusive), both directions.
    Radius(f64),
}

/// Graph over latent samples with `edge_cost(y_i, y_j)` on each directed
/// edge. Edges are emitted in ascending `(i, j)` order.
pub fn build_ndm_graph<F>(
    samples: &[DVector<f64>],
    connect: Connect,
    edge_cost: F,
) -> Result<WeightedDigraph<DVector<f64>>>
where
    F: Fn(&DVector<f64>, &DVector<f64>) -> f64,
{
    let n = samples.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
    }
    let dim = samples[0].len();
    if let Some(s) = samples.iter().find(|s| s.len() != dim) {
        return Err(Error::Dimension(format!("samples of dimension {dim} and {}", s.len())));
    }
    let mut linked = vec![vec![false; n]; n];
    match connect {
        Connect::Complete => {
            for (i, row) in linked.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = i != j;
                }
            }
        }
        Connect::KNearest(k) => {
            for i in 0..n {
                let mut others: Vec<(f64, usize)> =
                    (0..n).filter(|&j| j != i).map(|j| ((&samples[i] - &samples[j]).norm(), j)).collect();
                others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                for &(_, j) in others.iter().take(k) {
                    linked[i][j] = true;
                    linked[j][i] = true;
                }
            }
        }
        Connect::Radius(r) => {
            if !(r >= 0.0) {
                return Err(Error::InvalidArgument(format!("radius {r} must be >= 0")));
            }
            for i in 0..n {
                for j in 0..n {
                    linked[i][j] = i != j && (&samples[i] - &samples[j]).norm() <= r;
                }
            }
        }
    }
    let mut g = WeightedDigraph::new(samples.to_vec());
    for i in 0..n {
        for j in 0..n {
            if linked[i][j] {
                let w = edge_cost(&samples[i], &samples[j]);
                g.add_edge(i, j, w)?;
            }
        }
    }
    Ok(g)
}

/// Trapezoid edge cost `½(V(y_i) + V(y_j))`.
pub fn trapezoid_cost<V>(value: V) -> impl Fn(&DVector<f64>, &DVector<f64>) -> f64
where
    V: Fn(&DVector<f64>) -> f64,
{
    move |a, b| 0.5 * (value(a) + value(b))
}

/// Every `stride`-th element of `path`, always keeping both endpoints.
pub fn waypoints<T: Clone>(path: &[T], stride: usize) -> Result<Vec<T>> {
    if path.is_empty() {
        return Err(Error::InvalidArgument("empty path".into()));
    }
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be >= 1".into()));
    }
    let last = path.len() - 1;
    Ok(path
        .iter()
        .enumerate()
        .filter(|(k, _)| k % stride == 0 || *k == last)
        .map(|(_, x)| x.clone())
        .collect())
}
