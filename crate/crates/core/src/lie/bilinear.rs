use std::sync::Arc;

use num_traits::Zero;

use super::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Mat, RMat};
use crate::scalar::{PiMultiple, Rational, Scalar};

/// A bilinear form `⟨X, Y⟩ = scale · xᵀ G y` on a Lie algebra.
///
/// The scale may carry a power of π. Pairings computed through this type
/// use only the rational part of the scale; the π power travels alongside
/// the result (see [`BilinearForm::pi_power`]) and is resolved when a
/// number is finally reported.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    algebra: Arc<LieAlgebra>,
    gram: RMat,
    scale: PiMultiple,
}

impl BilinearForm {
    /// The trace form `tr(XY)` of the algebra's matrix realization.
    pub fn trace(algebra: &Arc<LieAlgebra>) -> Self {
        Self {
            gram: algebra.trace_gram(),
            algebra: Arc::clone(algebra),
            scale: PiMultiple::one(),
        }
    }

    /// The trace form scaled by `1/(16π²)`.
    pub fn normalized_trace(algebra: &Arc<LieAlgebra>) -> Self {
        Self::trace(algebra).with_scale(PiMultiple::sixteen_pi_sq_inv())
    }

    /// Any square Gram matrix of the right size; symmetry is not enforced
    /// here so that [`check_ad_invariance`] can reject bad forms.
    pub fn from_gram(algebra: &Arc<LieAlgebra>, gram: RMat, scale: PiMultiple) -> Result<Self> {
        if !gram.is_square() || gram.rows() != algebra.dim() {
            return Err(Error::ShapeMismatch {
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        Ok(Self {
            algebra: Arc::clone(algebra),
            gram,
            scale,
        })
    }

    pub fn with_scale(mut self, scale: PiMultiple) -> Self {
        self.scale = scale;
        self
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn gram(&self) -> &RMat {
        &self.gram
    }

    pub fn scale(&self) -> &PiMultiple {
        &self.scale
    }

    pub fn pi_power(&self) -> i32 {
        self.scale.pi_power
    }

    /// `G · scale.coeff`, the matrix every pairing in the crate uses.
    pub fn effective_gram<S: Scalar>(&self) -> Mat<S> {
        self.gram.map(|g| S::from_rational(&(g * &self.scale.coeff)))
    }

    /// `⟨x, y⟩` with the rational part of the scale.
    pub fn pair<S: Scalar>(&self, x: &[S], y: &[S]) -> S {
        let g = self.effective_gram::<S>();
        let gy = g.mul_vec(y);
        x.iter().zip(gy).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    pub fn is_symmetric(&self) -> bool {
        self.gram == self.gram.transpose()
    }

    /// Restriction to a subspace given by the columns of `embedding`.
    pub fn restricted_gram(&self, embedding: &RMat) -> RMat {
        &(&embedding.transpose() * &self.gram) * embedding
    }

    /// A basis triple `(z, x, y)` with `⟨[z,x],y⟩ + ⟨x,[z,y]⟩ ≠ 0`, if any.
    pub fn ad_invariance_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.algebra.dim();
        let e = |i: usize| {
            let mut v = vec![Rational::zero(); n];
            v[i] = num_traits::One::one();
            v
        };
        for z in 0..n {
            for x in 0..n {
                let zx = self.algebra.bracket(&e(z), &e(x));
                for y in 0..n {
                    let zy = self.algebra.bracket(&e(z), &e(y));
                    let total = self.raw_pair(&zx, &e(y)) + self.raw_pair(&e(x), &zy);
                    if !total.is_zero() {
                        return Some((z, x, y));
                    }
                }
            }
        }
        None
    }

    fn raw_pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(gy).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// True iff the form is symmetric and ad-invariant on every basis triple.
///
/// Gram matrices are rational, so both conditions are decided exactly;
/// this is stricter than (and implies) the 1e-12 float criterion.
pub fn check_ad_invariance(form: &BilinearForm) -> bool {
    form.is_symmetric() && form.ad_invariance_violation().is_none()
}

/// The constant alternating tensor `T(X,Y,Z) = −(1/6)⟨X,[Y,Z]⟩`.
///
/// The induced left-invariant 3-form `Σ_{abc} T_{abc} ω^a∧ω^b∧ω^c` is the
/// Chern–Simons form of the Maurer–Cartan form; its coefficient on an
/// increasing monomial `ω^i∧ω^j∧ω^k` is `6·T_{ijk} = −⟨b_i,[b_j,b_k]⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsTensor {
    dim: usize,
    entries: Vec<Rational>,
    pi_power: i32,
}

impl CsTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.entries[(i * self.dim + j) * self.dim + k]
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    /// Coefficient of `ω^i∧ω^j∧ω^k` in the induced 3-form.
    pub fn form_coefficient(&self, i: usize, j: usize, k: usize) -> Rational {
        self.get(i, j, k) * Rational::from_integer(6.into())
    }

    pub fn is_totally_antisymmetric(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let t = self.get(i, j, k);
                    *self.get(j, i, k) == -t && *self.get(i, k, j) == -t && *self.get(k, j, i) == -t
                })
            })
        })
    }
}

pub fn maurer_cartan_cs_tensor(form: &BilinearForm) -> CsTensor {
    let alg = form.algebra();
    let n = alg.dim();
    let sixth = Rational::new((-1).into(), 6.into());
    let mut entries = vec![Rational::zero(); n * n * n];
    let unit = |i: usize| {
        let mut v = vec![Rational::zero(); n];
        v[i] = num_traits::One::one();
        v
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let yz = alg.bracket(&unit(j), &unit(k));
                entries[(i * n + j) * n + k] = form.pair(&unit(i), &yz) * &sixth;
            }
        }
    }
    CsTensor {
        dim: n,
        entries,
        pi_power: form.pi_power(),
    }
}
