//! Fact-consistency and workspace-geodesic losses.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

use crate::{Error, Result};

/// Floor applied to every log-probability in the fact loss.
pub const LOG_FLOOR: f64 = -30.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Fact {
    pub subject: String,
    pub relation: String,
    pub object: String,
    pub truth: bool,
    pub weight: f64,
}

impl Fact {
    pub fn new(subject: &str, relation: &str, object: &str, truth: bool, weight: f64) -> Fact {
        Fact {
            subject: subject.into(),
            relation: relation.into(),
            object: object.into(),
            truth,
            weight,
        }
    }
}

/// Non-empty list of facts with finite non-negative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FactSet(Vec<Fact>);

impl FactSet {
    pub fn new(facts: Vec<Fact>) -> Result<FactSet> {
        if facts.is_empty() {
            return Err(Error::InvalidArgument("fact set is empty".into()));
        }
        if let Some(f) = facts.iter().find(|f| !(f.weight >= 0.0) || !f.weight.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "fact ({}, {}, {}) has weight {}",
                f.subject, f.relation, f.object, f.weight
            )));
        }
        Ok(FactSet(facts))
    }

    pub fn facts(&self) -> &[Fact] {
        &self.0
    }
}

/// Fact scoring head `s(f | z)`.
#[derive(Clone)]
pub struct FactScorer(Arc<ScoreFn>);

type ScoreFn = dyn Fn(&Fact, &DVector<f64>) -> f64 + Send + Sync;

impl fmt::Debug for FactScorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FactScorer(..)")
    }
}

impl FactScorer {
    pub fn new<F>(score: F) -> FactScorer
    where
        F: Fn(&Fact, &DVector<f64>) -> f64 + Send + Sync + 'static,
    {
        FactScorer(Arc::new(score))
    }

    pub fn score(&self, fact: &Fact, z: &DVector<f64>) -> f64 {
        (self.0)(fact, z)
    }
}

/// `ln σ(s)` computed without overflow.
fn log_sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        -(-s).exp().ln_1p()
    } else {
        s - s.exp().ln_1p()
    }
}

/// Weighted binary cross-entropy of the scorer against the fact labels,
/// averaged over the number of facts.
pub fn ws_fact_loss(z: &DVector<f64>, facts: &FactSet, scorer: &FactScorer) -> Result<f64> {
    let mut total = 0.0;
    for f in facts.facts() {
        let s = scorer.score(f, z);
        if s.is_nan() {
            return Err(Error::InvalidArgument(format!("scorer returned NaN for ({}, {}, {})", f.subject, f.relation, f.object)));
        }
        let log_q = if f.truth { log_sigmoid(s) } else { log_sigmoid(-s) };
        total += f.weight * -log_q.max(LOG_FLOOR);
    }
    Ok(total / facts.facts().len() as f64)
}

/// `Σ (dist(z_i, z_j) − f(d_WS))²` over `(z_i, z_j, d_WS)` triples.
/// `f_map` must be monotone (either direction) on the sampled `d_WS` values.
pub fn ws_geo_loss<F, D>(pairs: &[(DVector<f64>, DVector<f64>, f64)], f_map: F, dist: D) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(&DVector<f64>, &DVector<f64>) -> Result<f64>,
{
    let mut samples: Vec<(f64, f64)> = pairs.iter().map(|p| (p.2, f_map(p.2))).collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let steps: Vec<f64> = samples.windows(2).filter(|w| w[1].0 > w[0].0).map(|w| w[1].1 - w[0].1).collect();
    if steps.iter().any(|d| *d > 0.0) && steps.iter().any(|d| *d < 0.0) {
        return Err(Error::InvalidArgument("workspace distance map is not monotone on the samples".into()));
    }
    let mut total = 0.0;
    for (zi, zj, d_ws) in pairs {
        let r = dist(zi, zj)? - f_map(*d_ws);
        total += r * r;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn facts(list: &[(bool, f64)]) -> FactSet {
        FactSet::new(list.iter().map(|&(t, w)| Fact::new("Alice", "in", "Room A", t, w)).collect()).unwrap()
    }

    fn z() -> DVector<f64> {
        DVector::zeros(1)
    }

    #[test]
    fn fact_loss_examples() {
        let zero = FactScorer::new(|_, _| 0.0);
        let l = ws_fact_loss(&z(), &facts(&[(true, 1.0), (false, 1.0)]), &zero).unwrap();
        assert!((l - 2f64.ln()).abs() < 1e-15);

        let confident = FactScorer::new(|f, _| if f.truth { 30.0 } else { -30.0 });
        let l = ws_fact_loss(&z(), &facts(&[(true, 1.0), (false, 1.0)]), &confident).unwrap();
        assert!((0.0..1e-12).contains(&l));

        let l = ws_fact_loss(&z(), &facts(&[(true, 2.0), (false, 0.0)]), &zero).unwrap();
        assert!((l - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn fact_loss_floor() {
        let wrong = FactScorer::new(|_, _| -1e6);
        let l = ws_fact_loss(&z(), &facts(&[(true, 1.0)]), &wrong).unwrap();
        assert_eq!(l, 30.0);
    }

    #[test]
    fn fact_set_validation() {
        assert!(FactSet::new(vec![]).is_err());
        assert!(FactSet::new(vec![Fact::new("a", "b", "c", true, -1.0)]).is_err());
    }

    fn euclid(a: &DVector<f64>, b: &DVector<f64>) -> Result<f64> {
        Ok((a - b).norm())
    }

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn geo_loss_examples() {
        let exact = vec![(v(&[0.0, 0.0]), v(&[3.0, 4.0]), 5.0), (v(&[1.0, 1.0]), v(&[1.0, 2.0]), 1.0)];
        assert_eq!(ws_geo_loss(&exact, |d| d, euclid).unwrap(), 0.0);

        let single = vec![(v(&[0.0]), v(&[2.0]), 1.0)];
        assert_eq!(ws_geo_loss(&single, |d| d, euclid).unwrap(), 1.0);

        // dists 5, 1, 2 against targets 4, 1.5, 2 -> 1 + 0.25 + 0.
        let three = vec![
            (v(&[0.0, 0.0]), v(&[3.0, 4.0]), 4.0),
            (v(&[0.0, 0.0]), v(&[1.0, 0.0]), 1.5),
            (v(&[0.0, 0.0]), v(&[0.0, 2.0]), 2.0),
        ];
        assert_eq!(ws_geo_loss(&three, |d| d, euclid).unwrap(), 1.25);
        assert!(ws_geo_loss(&three, |d| -d, euclid).is_ok());
        assert!(ws_geo_loss(&three, |d| (d - 2.0).powi(2), euclid).is_err());
    }
}
