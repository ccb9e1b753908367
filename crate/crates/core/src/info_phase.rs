//! Information phase space.
//!
//! A run of next-outcome distributions becomes a portrait of points
//! `(u_t, e_t)`: entropy in nats and its per-step drop. Portraits are binned
//! into an empirical vector field whose divergence and Hamiltonian fit
//! diagnose how close the macro dynamics are to a conservative flow.

use nalgebra::{DMatrix, DVector};

use crate::{fmt, Error, Result};

const NORMALIZATION_TOL: f64 = 1e-9;

/// Shannon entropy in nats, with `0·log 0 = 0`.
pub fn entropy(dist: &[f64]) -> Result<f64> {
    if dist.is_empty() {
        return Err(Error::InvalidArgument("empty distribution".into()));
    }
    if let Some(p) = dist.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("probability {p} is not a finite non-negative number")));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
    }
    Ok(-dist.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>())
}

/// Softmax of a logit vector, shifted by its maximum.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ex: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let z: f64 = ex.iter().sum();
    ex.into_iter().map(|x| x / z).collect()
}

/// Sequence of `(u, e)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePortrait {
    points: Vec<(f64, f64)>,
}

impl PhasePortrait {
    /// Wraps raw points; every `u` must be finite and non-negative.
    pub fn from_points(points: Vec<(f64, f64)>) -> Result<PhasePortrait> {
        for (t, &(u, e)) in points.iter().enumerate() {
            if !(u >= 0.0) || !u.is_finite() || !e.is_finite() {
                return Err(Error::InvalidArgument(format!("point {t} = ({u}, {e}) is not a valid (u >= 0, e) pair")));
            }
        }
        Ok(PhasePortrait { points })
    }

    /// Builds a portrait from an entropy sequence. `e_0 = 0`; later efforts
    /// are `u_{t-1} - u_t`, smoothed by a centered moving average of width
    /// `window` (1 disables smoothing). The window is truncated at the ends.
    pub fn from_entropies(u: &[f64], window: usize) -> Result<PhasePortrait> {
        if u.len() < 2 {
            return Err(Error::InvalidArgument(format!("portrait needs at least 2 steps, got {}", u.len())));
        }
        if window == 0 {
            return Err(Error::InvalidArgument("smoothing window must be >= 1".into()));
        }
        let raw: Vec<f64> = u.windows(2).map(|w| w[0] - w[1]).collect();
        let (back, ahead) = ((window - 1) / 2, window / 2);
        let smoothed: Vec<f64> = (0..raw.len())
            .map(|t| {
                let lo = t.saturating_sub(back);
                let hi = (t + ahead).min(raw.len() - 1);
                raw[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
            })
            .collect();
        let points = std::iter::once((u[0], 0.0))
            .chain(u[1..].iter().copied().zip(smoothed))
            .collect();
        PhasePortrait::from_points(points)
    }

    pub fn from_distributions<D: AsRef<[f64]>>(dists: &[D], window: usize) -> Result<PhasePortrait> {
        let u = dists
            .iter()
            .enumerate()
            .map(|(t, d)| entropy(d.as_ref()).map_err(|e| Error::InvalidArgument(format!("step {t}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        PhasePortrait::from_entropies(&u, window)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV with header `t,u,e`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,u,e\n");
        for (t, (u, e)) in self.points.iter().enumerate() {
            out.push_str(&format!("{t},{},{}\n", fmt::real(*u), fmt::real(*e)));
        }
        out
    }
}

/// Parses one distribution per line (whitespace or comma separated).
/// Blank lines and `#` comments are skipped.
pub fn read_distributions(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let dist = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| Error::parse(i + 1, format!("not a number: {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        entropy(&dist).map_err(|e| Error::parse(i + 1, e.to_string()))?;
        out.push(dist);
    }
    Ok(out)
}

/// Binned mean per-step displacement over the `(u, e)` plane.
/// Cell `(i, j)` covers `u_edges[i]..u_edges[i+1]` and `e_edges[j]..e_edges[j+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub u_edges: Vec<f64>,
    pub e_edges: Vec<f64>,
    pub vu: DMatrix<f64>,
    pub ve: DMatrix<f64>,
    pub counts: DMatrix<usize>,
}

fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
    (0..=bins).map(|k| lo + (hi - lo) * k as f64 / bins as f64).collect()
}

fn bin_of(edges: &[f64], x: f64) -> usize {
    let bins = edges.len() - 1;
    let w = (edges[bins] - edges[0]) / bins as f64;
    (((x - edges[0]) / w).floor().max(0.0) as usize).min(bins - 1)
}

impl GridField {
    pub fn bins(&self) -> (usize, usize) {
        (self.u_edges.len() - 1, self.e_edges.len() - 1)
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            0.5 * (self.u_edges[i] + self.u_edges[i + 1]),
            0.5 * (self.e_edges[j] + self.e_edges[j + 1]),
        )
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (self.u_edges[1] - self.u_edges[0], self.e_edges[1] - self.e_edges[0])
    }

    pub fn occupied(&self, i: usize, j: usize) -> bool {
        self.counts[(i, j)] > 0
    }

    /// Occupied cells in row-major order.
    pub fn occupied_cells(&self) -> Vec<(usize, usize)> {
        let (nu, ne) = self.bins();
        (0..nu)
            .flat_map(|i| (0..ne).map(move |j| (i, j)))
            .filter(|&(i, j)| self.occupied(i, j))
            .collect()
    }

    /// CSV with header `u_center,e_center,Vu,Ve,count`; empty cells included with count 0.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u_center,e_center,Vu,Ve,count\n");
        let (nu, ne) = self.bins();
        for i in 0..nu {
            for j in 0..ne {
                let (cu, ce) = self.cell_center(i, j);
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt::real(cu),
                    fmt::real(ce),
                    fmt::real(self.vu[(i, j)]),
                    fmt::real(self.ve[(i, j)]),
                    self.counts[(i, j)]
                ));
            }
        }
        out
    }
}

/// Bins each step displacement `(Δu, Δe)` by the cell of its start point and
/// averages. Bin edges are uniform over the range of all portrait points.
pub fn empirical_field(portraits: &[PhasePortrait], bins_u: usize, bins_e: usize) -> Result<GridField> {
    if bins_u == 0 || bins_e == 0 {
        return Err(Error::InvalidArgument("bin counts must be >= 1".into()));
    }
    let all = portraits.iter().flat_map(|p| p.points.iter());
    let (mut ulo, mut uhi, mut elo, mut ehi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(u, e) in all {
        ulo = ulo.min(u);
        uhi = uhi.max(u);
        elo = elo.min(e);
        ehi = ehi.max(e);
    }
    if portraits.iter().all(|p| p.len() < 2) {
        return Err(Error::InvalidArgument("no portrait has a displacement; need at least 2 points".into()));
    }
    let u_edges = uniform_edges(ulo, uhi, bins_u);
    let e_edges = uniform_edges(elo, ehi, bins_e);
    let mut vu = DMatrix::zeros(bins_u, bins_e);
    let mut ve = DMatrix::zeros(bins_u, bins_e);
    let mut counts = DMatrix::from_element(bins_u, bins_e, 0usize);
    for p in portraits {
        for w in p.points.windows(2) {
            let (i, j) = (bin_of(&u_edges, w[0].0), bin_of(&e_edges, w[0].1));
            vu[(i, j)] += w[1].0 - w[0].0;
            ve[(i, j)] += w[1].1 - w[0].1;
            counts[(i, j)] += 1;
        }
    }
    for (idx, &c) in counts.iter().enumerate() {
        if c > 0 {
            vu[idx] /= c as f64;
            ve[idx] /= c as f64;
        }
    }
    Ok(GridField { u_edges, e_edges, vu, ve, counts })
}

/// Mean absolute central-difference divergence over interior cells (cells
/// whose four neighbours are occupied), relative to the mean field magnitude
/// on those cells.
pub fn divergence_score(field: &GridField) -> Result<f64> {
    let (nu, ne) = field.bins();
    let (du, de) = field.cell_size();
    let occ = |i: usize, j: usize| field.occupied(i, j);
    let mut div_sum = 0.0;
    let mut mag_sum = 0.0;
    let mut n = 0usize;
    for i in 1..nu.saturating_sub(1) {
        for j in 1..ne.saturating_sub(1) {
            if !(occ(i, j) && occ(i - 1, j) && occ(i + 1, j) && occ(i, j - 1) && occ(i, j + 1)) {
                continue;
            }
            let div = (field.vu[(i + 1, j)] - field.vu[(i - 1, j)]) / (2.0 * du)
                + (field.ve[(i, j + 1)] - field.ve[(i, j - 1)]) / (2.0 * de);
            div_sum += div.abs();
            mag_sum += field.vu[(i, j)].hypot(field.ve[(i, j)]);
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::InvalidArgument("no interior occupied cell; need a 3x3 occupied block".into()));
    }
    let mag = mag_sum / n as f64;
    if mag == 0.0 {
        return Err(Error::DegenerateSystem("field is zero on every interior cell".into()));
    }
    Ok((div_sum / n as f64) / (mag + 1e-12))
}

/// Cell-centred information Hamiltonian, `None` on empty cells.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianFit {
    pub values: DMatrix<Option<f64>>,
    pub residual: f64,
}

/// Least-squares `H_IF` with `u̇ = ∂H/∂e` and `ė = −∂H/∂u`.
///
/// Each pair of occupied neighbouring cells contributes one equation: the
/// difference of `H` across the shared face equals the face-averaged field
/// component times the cell spacing. `H` is pinned to 0 at the first occupied
/// cell in row-major order.
pub fn fit_info_hamiltonian(field: &GridField) -> Result<HamiltonianFit> {
    let (nu, ne) = field.bins();
    let (du, de) = field.cell_size();
    let cells = field.occupied_cells();
    if cells.is_empty() {
        return Err(Error::Fit("no occupied cells".into()));
    }
    let mut index = DMatrix::from_element(nu, ne, usize::MAX);
    for (k, &(i, j)) in cells.iter().enumerate() {
        index[(i, j)] = k;
    }
    let mut rows: Vec<(usize, usize, f64)> = Vec::new();
    for &(i, j) in &cells {
        if i + 1 < nu && field.occupied(i + 1, j) {
            let ve = 0.5 * (field.ve[(i, j)] + field.ve[(i + 1, j)]);
            rows.push((index[(i + 1, j)], index[(i, j)], -ve * du));
        }
        if j + 1 < ne && field.occupied(i, j + 1) {
            let vu = 0.5 * (field.vu[(i, j)] + field.vu[(i, j + 1)]);
            rows.push((index[(i, j + 1)], index[(i, j)], vu * de));
        }
    }
    let unknowns = cells.len() - 1;
    let mut h = DVector::zeros(cells.len());
    let mut residual = 0.0;
    if unknowns > 0 {
        if rows.len() < unknowns {
            return Err(Error::Fit(format!("{} face equations for {unknowns} unknowns; occupied region is disconnected", rows.len())));
        }
        // Column k-1 holds cell k; cell 0 is the gauge.
        let mut a = DMatrix::zeros(rows.len(), unknowns);
        let mut b = DVector::zeros(rows.len());
        for (r, &(plus, minus, rhs)) in rows.iter().enumerate() {
            if plus > 0 {
                a[(r, plus - 1)] += 1.0;
            }
            if minus > 0 {
                a[(r, minus - 1)] -= 1.0;
            }
            b[r] = rhs;
        }
        let svd = a.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let rank = svd.rank(smax * 1e-10);
        if rank < unknowns {
            return Err(Error::Fit(format!("rank {rank} < {unknowns}; occupied region is disconnected")));
        }
        let x = svd.solve(&b, smax * 1e-10).map_err(|e| Error::Fit(e.to_string()))?;
        residual = (&a * &x - &b).norm();
        h.rows_mut(1, unknowns).copy_from(&x);
    }
    let mut values = DMatrix::from_element(nu, ne, None);
    for (k, &(i, j)) in cells.iter().enumerate() {
        values[(i, j)] = Some(h[k]);
    }
    Ok(HamiltonianFit { values, residual })
}

/// Seeded synthetic portraits for demos and diagnostics.
pub mod synthetic {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::PhasePortrait;
    use crate::Result;

    /// Centre of the rotation generator; keeps `u` positive.
    pub const ROTATION_CENTER: (f64, f64) = (2.0, 0.0);

    /// Portraits stepped through `u̇ = e, ė = −(u − u_c)` with per-step
    /// displacement `tau·V(x)`. Start points are uniform on the annulus
    /// `0.2 ≤ r ≤ 1.5` around the centre.
    pub fn rotation_portraits(count: usize, steps: usize, tau: f64, seed: u64) -> Result<Vec<PhasePortrait>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (uc, _) = ROTATION_CENTER;
        (0..count)
            .map(|_| {
                let r = (rng.gen_range(0.04f64..2.25)).sqrt();
                let th = rng.gen_range(0.0..std::f64::consts::TAU);
                let (mut u, mut e) = (uc + r * th.cos(), r * th.sin());
                let mut pts = vec![(u, e)];
                for _ in 0..steps {
                    let (du, de) = (tau * e, -tau * (u - uc));
                    u += du;
                    e += de;
                    pts.push((u, e));
                }
                PhasePortrait::from_points(pts)
            })
            .collect()
    }

    /// The stationary Hamiltonian of [`rotation_portraits`] in per-step units.
    pub fn rotation_hamiltonian(u: f64, e: f64, tau: f64) -> f64 {
        0.5 * tau * ((u - ROTATION_CENTER.0).powi(2) + e * e)
    }

    /// Portraits of a constant distribution: every effort is zero.
    pub fn constant_portraits(count: usize, steps: usize, dist: &[f64]) -> Result<Vec<PhasePortrait>> {
        let dists = vec![dist.to_vec(); steps + 1];
        (0..count).map(|_| PhasePortrait::from_distributions(&dists, 1)).collect()
    }
}
