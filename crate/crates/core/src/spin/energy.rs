use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{symmetric_part, SpinSystem};
use crate::{Error, Result};

/// `H₂ = −Σ_{i<j} J_ij s_i·s_j − Σ_i h_i·s_i`.
///
/// Asymmetric couplings enter through their symmetric part, so that
/// [`energy_gradient`] is the exact gradient of this function.
pub fn two_body_energy(sys: &SpinSystem) -> f64 {
    let vs: Vec<&DVector<f64>> = sys.spins().iter().map(|s| s.as_vector()).collect();
    pair_and_field_energy(&vs, sys.couplings(), sys.fields())
}

/// [`two_body_energy`] evaluated on arbitrary (not necessarily unit) vectors.
pub fn two_body_energy_of(
    vectors: &[DVector<f64>],
    couplings: &DMatrix<f64>,
    fields: &[DVector<f64>],
) -> f64 {
    let vs: Vec<&DVector<f64>> = vectors.iter().collect();
    pair_and_field_energy(&vs, couplings, fields)
}

fn pair_and_field_energy(vs: &[&DVector<f64>], j: &DMatrix<f64>, h: &[DVector<f64>]) -> f64 {
    let n = vs.len();
    let mut e = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            let jab = 0.5 * (j[(a, b)] + j[(b, a)]);
            e -= jab * vs[a].dot(vs[b]);
        }
        e -= h[a].dot(vs[a]);
    }
    e
}

/// `∂H₂/∂s_i = −Σ_{j≠i} J^sym_ij s_j − h_i` for every spin, in the ambient space.
pub fn energy_gradient(sys: &SpinSystem) -> Vec<DVector<f64>> {
    let js = symmetric_part(sys.couplings());
    let n = sys.len();
    (0..n)
        .map(|i| {
            let mut g = -&sys.fields()[i];
            for (jdx, s) in sys.spins().iter().enumerate() {
                if jdx != i {
                    g -= s.as_vector() * js[(i, jdx)];
                }
            }
            g
        })
        .collect()
}

type Trilinear = dyn Fn(&DVector<f64>, &DVector<f64>, &DVector<f64>) -> f64 + Send + Sync;

/// A symmetric three-argument form `f(a, b, c)` used by three-body terms.
#[derive(Clone)]
pub struct SymmetricForm {
    f: Arc<Trilinear>,
}

impl fmt::Debug for SymmetricForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SymmetricForm(..)")
    }
}

impl SymmetricForm {
    /// Registers `f` after checking permutation symmetry on random unit
    /// triples in dimension `dim`.
    pub fn new<F>(f: F, dim: usize) -> Result<SymmetricForm>
    where
        F: Fn(&DVector<f64>, &DVector<f64>, &DVector<f64>) -> f64 + Send + Sync + 'static,
    {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_3b0d);
        for _ in 0..16 {
            let mut draw = || {
                let v: DVector<f64> = DVector::from_fn(dim.max(1), |_, _| rng.gen_range(-1.0..1.0));
                let n = v.norm().max(1e-12);
                v / n
            };
            let (a, b, c) = (draw(), draw(), draw());
            let base = f(&a, &b, &c);
            let perms = [
                f(&a, &c, &b),
                f(&b, &a, &c),
                f(&b, &c, &a),
                f(&c, &a, &b),
                f(&c, &b, &a),
            ];
            for v in perms {
                if (v - base).abs() > 1e-10 * (1.0 + base.abs()) {
                    return Err(Error::InvalidArgument(format!(
                        "three-body form is not symmetric: {base} vs {v}"
                    )));
                }
            }
        }
        Ok(SymmetricForm { f: Arc::new(f) })
    }

    /// `(a·b)(b·c) + (b·c)(c·a) + (c·a)(a·b)`.
    pub fn pairwise_dots() -> SymmetricForm {
        SymmetricForm {
            f: Arc::new(|a, b, c| {
                let (ab, bc, ca) = (a.dot(b), b.dot(c), c.dot(a));
                ab * bc + bc * ca + ca * ab
            }),
        }
    }

    pub fn eval(&self, a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>) -> f64 {
        (self.f)(a, b, c)
    }
}

impl Default for SymmetricForm {
    fn default() -> Self {
        SymmetricForm::pairwise_dots()
    }
}

/// `H₃ = −Σ_{i<j<k} K_ijk f(s_i, s_j, s_k)`.
pub fn three_body_energy(sys: &SpinSystem, form: &SymmetricForm) -> f64 {
    let s = sys.spins();
    sys.three_body()
        .iter()
        .map(|t| {
            -t.strength * form.eval(s[t.i].as_vector(), s[t.j].as_vector(), s[t.k].as_vector())
        })
        .sum()
}
