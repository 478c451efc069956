use std::sync::Arc;

use num_traits::Zero;

use super::algebra::LieAlgebra;
use super::bilinear::BilinearForm;
use crate::error::{Error, Result};
use crate::linalg::{Mat, RMat};
use crate::scalar::{Rational, Scalar};

/// The splitting `g̃ = g ⊕ g^⊥` of an ambient algebra relative to an
/// embedded subalgebra and an invariant form.
///
/// All vectors here are coordinates in the ambient basis.
#[derive(Debug, Clone)]
pub struct OrthogonalDecomposition {
    form: BilinearForm,
    sub: Arc<LieAlgebra>,
    embedding: RMat,
    top: RMat,
    perp: RMat,
    perp_basis: Vec<Vec<Rational>>,
}

impl OrthogonalDecomposition {
    /// `embedding` has one column per basis element of `sub`, holding its
    /// coordinates in the ambient basis of `form.algebra()`.
    pub fn new(form: &BilinearForm, sub: &Arc<LieAlgebra>, embedding: RMat) -> Result<Self> {
        let ambient = form.algebra();
        if embedding.rows() != ambient.dim() || embedding.cols() != sub.dim() {
            return Err(Error::ShapeMismatch {
                rows: embedding.rows(),
                cols: embedding.cols(),
            });
        }
        check_homomorphism(ambient, sub, &embedding)?;

        let restricted = form.restricted_gram(&embedding);
        if restricted.determinant().is_zero() {
            return Err(Error::DegenerateRestriction);
        }
        // P = E (EᵀGE)⁻¹ EᵀG projects onto g along its G-orthogonal complement.
        let inv = restricted.inverse(0.0)?;
        let top = &(&(&embedding * &inv) * &embedding.transpose()) * form.gram();
        let perp = &RMat::identity(ambient.dim()) - &top;
        let perp_basis = perp
            .independent_columns(0.0)
            .into_iter()
            .map(|c| perp.column(c))
            .collect();
        Ok(Self {
            form: form.clone(),
            sub: Arc::clone(sub),
            embedding,
            top,
            perp,
            perp_basis,
        })
    }

    /// Embedding of `sub` as the lower-right block of the ambient matrices:
    /// `A ↦ diag(0, …, 0, A)`.
    pub fn lower_right_embedding(ambient: &LieAlgebra, sub: &LieAlgebra) -> Result<RMat> {
        let big = ambient.matrix_size();
        let small = sub.matrix_size();
        if small > big {
            return Err(Error::ShapeMismatch { rows: small, cols: big });
        }
        let offset = big - small;
        let mut embedding = RMat::zeros(ambient.dim(), sub.dim());
        for (c, b) in sub.basis().iter().enumerate() {
            let padded = RMat::from_fn(big, big, |i, j| {
                if i >= offset && j >= offset {
                    b[(i - offset, j - offset)].clone()
                } else {
                    Rational::zero()
                }
            });
            let coords = ambient.coordinates(&padded, 0.0)?;
            for (r, v) in coords.into_iter().enumerate() {
                embedding[(r, c)] = v;
            }
        }
        Ok(embedding)
    }

    pub fn ambient(&self) -> &Arc<LieAlgebra> {
        self.form.algebra()
    }

    pub fn sub(&self) -> &Arc<LieAlgebra> {
        &self.sub
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    pub fn embedding(&self) -> &RMat {
        &self.embedding
    }

    pub fn projector_top(&self) -> &RMat {
        &self.top
    }

    pub fn projector_perp(&self) -> &RMat {
        &self.perp
    }

    /// A basis of `g^⊥` (ambient coordinates).
    pub fn perp_basis(&self) -> &[Vec<Rational>] {
        &self.perp_basis
    }

    pub fn project_top<S: Scalar>(&self, v: &[S]) -> Vec<S> {
        self.top.map(S::from_rational).mul_vec(v)
    }

    pub fn project_perp<S: Scalar>(&self, v: &[S]) -> Vec<S> {
        self.perp.map(S::from_rational).mul_vec(v)
    }

    /// `[g^⊥, g^⊥] ⊆ g`, checked on basis pairs.
    pub fn is_symmetric_pair(&self) -> bool {
        let alg = self.ambient();
        self.perp_basis.iter().all(|u| {
            self.perp_basis
                .iter()
                .all(|v| self.project_perp(&alg.bracket(u, v)).iter().all(Zero::is_zero))
        })
    }

    /// `[g, g^⊥] ⊆ g^⊥`, checked on basis pairs.
    pub fn perp_is_invariant(&self) -> bool {
        let alg = self.ambient();
        (0..self.embedding.cols()).all(|c| {
            let x = self.embedding.column(c);
            self.perp_basis
                .iter()
                .all(|v| self.project_top(&alg.bracket(&x, v)).iter().all(Zero::is_zero))
        })
    }

    /// Splits `[v1, v2]` into its `g` and `g^⊥` parts.
    pub fn perp_bracket_component<S: Scalar>(&self, v1: &[S], v2: &[S]) -> (Vec<S>, Vec<S>) {
        let b = self.ambient().bracket(v1, v2);
        (self.project_top(&b), self.project_perp(&b))
    }

    /// Largest violation of the projector identities (zero for exact data).
    pub fn invariant_residual(&self) -> Rational {
        let n = self.top.rows();
        let sum = &(&self.top + &self.perp) - &RMat::identity(n);
        let idem_top = &(&self.top * &self.top) - &self.top;
        let idem_perp = &(&self.perp * &self.perp) - &self.perp;
        let cross = &(&self.top.transpose() * self.form.gram()) * &self.perp;
        let image = &self.top * &self.embedding;
        let image = &image - &self.embedding;
        [sum, idem_top, idem_perp, cross, image]
            .iter()
            .flat_map(|m| m.as_slice().iter().cloned())
            .map(|x| if x < Rational::zero() { -x } else { x })
            .fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }

    /// `⟨top(v), perp(w)⟩` for float vectors.
    pub fn cross_pairing(&self, v: &[f64], w: &[f64]) -> f64 {
        let tv = self.project_top(v);
        let pw = self.project_perp(w);
        let g: Mat<f64> = self.form.gram().map(|q| q.to_f64());
        tv.iter().zip(g.mul_vec(&pw)).map(|(a, b)| a * b).sum()
    }
}

fn check_homomorphism(ambient: &LieAlgebra, sub: &LieAlgebra, embedding: &RMat) -> Result<()> {
    let n = sub.dim();
    let unit = |i: usize| {
        let mut v = vec![Rational::zero(); n];
        v[i] = num_traits::One::one();
        v
    };
    for i in 0..n {
        for j in 0..n {
            let lhs = embedding.mul_vec(&sub.bracket(&unit(i), &unit(j)));
            let rhs = ambient.bracket(&embedding.column(i), &embedding.column(j));
            if lhs != rhs {
                return Err(Error::InvalidStructure("embedding is not a Lie algebra homomorphism"));
            }
        }
    }
    Ok(())
}
