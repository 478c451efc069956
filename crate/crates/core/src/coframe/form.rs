use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::blade::{Blade, MAX_RANK};
use super::complex::CoframeComplex;
use crate::error::{Error, Result};
use crate::lie::{BilinearForm, LieAlgebra, OrthogonalDecomposition};
use crate::linalg::Mat;
use crate::scalar::{Rational, Scalar};

/// Where the coefficients of a [`ValuedForm`] live.
#[derive(Clone, PartialEq)]
pub enum ValueSpace {
    Scalar,
    Algebra(Arc<LieAlgebra>),
}

impl ValueSpace {
    pub fn dim(&self) -> usize {
        match self {
            ValueSpace::Scalar => 1,
            ValueSpace::Algebra(g) => g.dim(),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            ValueSpace::Scalar => "scalar",
            ValueSpace::Algebra(g) => g.name(),
        }
    }

    pub fn algebra(&self) -> Option<&Arc<LieAlgebra>> {
        match self {
            ValueSpace::Scalar => None,
            ValueSpace::Algebra(g) => Some(g),
        }
    }
}

impl fmt::Debug for ValueSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A left-invariant differential form with scalar or Lie-algebra values.
///
/// `Σ_I ω^I ⊗ v_I` over strictly increasing multi-indices `I` of length
/// `degree`, with `v_I` given in basis coordinates. Blades whose value
/// vector is exactly zero are not stored.
#[derive(Clone, PartialEq)]
pub struct ValuedForm<S> {
    rank: usize,
    degree: usize,
    space: ValueSpace,
    terms: BTreeMap<Blade, Vec<S>>,
}

impl<S: Scalar> ValuedForm<S> {
    pub fn zero(rank: usize, degree: usize, space: ValueSpace) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(Error::InvalidConfig(format!("coframe rank {rank} exceeds {MAX_RANK}")));
        }
        if degree > rank {
            return Err(Error::DegreeOverflow(degree, rank));
        }
        Ok(Self {
            rank,
            degree,
            space,
            terms: BTreeMap::new(),
        })
    }

    /// The constant scalar function `c`.
    pub fn constant(rank: usize, c: S) -> Self {
        let mut f = Self::zero(rank, 0, ValueSpace::Scalar).expect("degree 0 fits any rank");
        f.add_term(Blade::EMPTY, vec![c]);
        f
    }

    /// The scalar 1-form `ω^i`.
    pub fn generator(rank: usize, i: usize) -> Self {
        assert!(i < rank, "generator index {i} out of range for rank {rank}");
        let mut f = Self::zero(rank, 1, ValueSpace::Scalar).expect("degree 1 fits any positive rank");
        f.add_term(Blade::single(i), vec![S::one()]);
        f
    }

    /// `Σ_i ω^i ⊗ b_i`, the Maurer–Cartan form when `f = c`.
    pub fn maurer_cartan(complex: &CoframeComplex, algebra: &Arc<LieAlgebra>) -> Result<Self> {
        if complex.rank() != algebra.dim() {
            return Err(Error::ShapeMismatch {
                rows: complex.rank(),
                cols: algebra.dim(),
            });
        }
        let n = algebra.dim();
        let mut f = Self::zero(n, 1, ValueSpace::Algebra(Arc::clone(algebra)))?;
        for i in 0..n {
            let mut v = vec![S::zero(); n];
            v[i] = S::one();
            f.add_term(Blade::single(i), v);
        }
        Ok(f)
    }

    /// Builds a form from possibly unordered index lists; each list is
    /// sign-normalized and lists with a repeated index are dropped.
    pub fn from_terms<I>(rank: usize, degree: usize, space: ValueSpace, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Vec<S>)>,
    {
        let mut f = Self::zero(rank, degree, space)?;
        for (indices, value) in terms {
            f.add_indexed(&indices, value)?;
        }
        Ok(f)
    }

    /// Adds `ω^{i₀}∧ω^{i₁}∧… ⊗ value` (indices in any order).
    pub fn add_indexed(&mut self, indices: &[usize], value: Vec<S>) -> Result<()> {
        if indices.len() != self.degree {
            return Err(Error::InvalidConfig(format!(
                "multi-index of length {} in a {}-form",
                indices.len(),
                self.degree
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.rank) {
            return Err(Error::InvalidConfig(format!("coframe index {bad} out of range for rank {}", self.rank)));
        }
        if value.len() != self.space.dim() {
            return Err(Error::ShapeMismatch {
                rows: value.len(),
                cols: self.space.dim(),
            });
        }
        if let Some((blade, sign)) = Blade::from_indices(indices) {
            let value = if sign < 0 { value.into_iter().map(|x| -x).collect() } else { value };
            self.add_term(blade, value);
        }
        Ok(())
    }

    /// Adds to the coefficient of an increasing blade of the right degree.
    pub(crate) fn add_term(&mut self, blade: Blade, value: Vec<S>) {
        debug_assert_eq!(blade.degree(), self.degree);
        debug_assert_eq!(value.len(), self.space.dim());
        match self.terms.get_mut(&blade) {
            Some(existing) => {
                for (e, v) in existing.iter_mut().zip(value) {
                    *e = e.clone() + v;
                }
                if existing.iter().all(S::is_zero) {
                    self.terms.remove(&blade);
                }
            }
            None => {
                if !value.iter().all(S::is_zero) {
                    self.terms.insert(blade, value);
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space(&self) -> &ValueSpace {
        &self.space
    }

    pub fn value_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &[S])> {
        self.terms.iter().map(|(b, v)| (*b, v.as_slice()))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `ω^{i₀}∧ω^{i₁}∧…` for indices in any order.
    pub fn component(&self, indices: &[usize]) -> Vec<S> {
        let zero = vec![S::zero(); self.value_dim()];
        match Blade::from_indices(indices) {
            Some((blade, sign)) if indices.len() == self.degree => match self.terms.get(&blade) {
                Some(v) if sign < 0 => v.iter().map(|x| -x.clone()).collect(),
                Some(v) => v.clone(),
                None => zero,
            },
            _ => zero,
        }
    }

    /// The single coefficient of a scalar form on `indices`.
    pub fn scalar_component(&self, indices: &[usize]) -> S {
        self.component(indices).swap_remove(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().flatten().map(S::magnitude).fold(0.0, f64::max)
    }

    /// Zero within `tol` per coefficient (exactly zero for exact scalars).
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.terms.values().flatten().all(|x| x.is_negligible(tol))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::AlgebraMismatch(self.space.name().into(), other.space.name().into()));
        }
        if self.rank != other.rank {
            return Err(Error::ShapeMismatch {
                rows: self.rank,
                cols: other.rank,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::InvalidConfig(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (b, v) in &other.terms {
            out.add_term(*b, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_values(|v| v.iter().map(|x| -x.clone()).collect(), self.space.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_values(|v| v.iter().map(|x| x.clone() * c.clone()).collect(), self.space.clone())
    }

    /// Applies a linear map `M` to every value vector, landing in `space`.
    pub fn apply_linear(&self, m: &Mat<S>, space: ValueSpace) -> Result<Self> {
        if m.cols() != self.value_dim() || m.rows() != space.dim() {
            return Err(Error::ShapeMismatch {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(self.map_values(|v| m.mul_vec(v), space))
    }

    fn map_values(&self, f: impl Fn(&[S]) -> Vec<S>, space: ValueSpace) -> Self {
        let mut out = Self {
            rank: self.rank,
            degree: self.degree,
            space,
            terms: BTreeMap::new(),
        };
        for (b, v) in &self.terms {
            out.add_term(*b, f(v));
        }
        out
    }

    /// Shared skeleton of all products: `Σ_{I,J} sign(I,J) ω^{I∪J} ⊗ combine(a_I, b_J)`.
    fn product(
        &self,
        other: &Self,
        space: ValueSpace,
        combine: impl Fn(&[S], &[S]) -> Vec<S>,
    ) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::ShapeMismatch {
                rows: self.rank,
                cols: other.rank,
            });
        }
        // Degrees above the rank are allowed here and yield the empty form.
        let mut out = Self {
            rank: self.rank,
            degree: self.degree + other.degree,
            space,
            terms: BTreeMap::new(),
        };
        for (ba, va) in &self.terms {
            for (bb, vb) in &other.terms {
                if let Some((blade, sign)) = ba.wedge(*bb) {
                    let mut value = combine(va, vb);
                    if sign < 0 {
                        value = value.into_iter().map(|x| -x).collect();
                    }
                    out.add_term(blade, value);
                }
            }
        }
        Ok(out)
    }

    /// `a ∧ b` for scalar-valued `self`; the result takes `b`'s value space.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.space != ValueSpace::Scalar {
            return Err(Error::AlgebraMismatch(self.space.name().into(), "scalar".into()));
        }
        if self.degree + other.degree > self.rank {
            return Err(Error::DegreeOverflow(self.degree + other.degree, self.rank));
        }
        self.product(other, other.space.clone(), |a, b| {
            b.iter().map(|x| a[0].clone() * x.clone()).collect()
        })
    }

    /// `⟨α⊗X, β⊗Y⟩ = ⟨X,Y⟩ α∧β`, a scalar form.
    ///
    /// Only the rational part of the form's scale enters; its π power is
    /// carried by `form`.
    pub fn pairing(&self, other: &Self, form: &BilinearForm) -> Result<Self> {
        self.check_compatible(other)?;
        self.require_algebra(form.algebra())?;
        let g = form.effective_gram::<S>();
        self.product(other, ValueSpace::Scalar, |a, b| {
            let gb = g.mul_vec(b);
            vec![a.iter().zip(gb).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y)]
        })
    }

    /// `[α⊗X, β⊗Y] = α∧β ⊗ [X,Y]`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let ValueSpace::Algebra(g) = &self.space else {
            return Err(Error::AlgebraMismatch("scalar".into(), "Lie algebra".into()));
        };
        let table = g.bracket_table::<S>();
        let n = g.dim();
        self.product(other, self.space.clone(), |a, b| {
            let mut out = vec![S::zero(); n];
            for (i, j, k, c) in &table {
                if a[*i].is_zero() || b[*j].is_zero() {
                    continue;
                }
                out[*k] = out[*k].clone() + c.clone() * a[*i].clone() * b[*j].clone();
            }
            out
        })
    }

    fn require_algebra(&self, algebra: &Arc<LieAlgebra>) -> Result<()> {
        match &self.space {
            ValueSpace::Algebra(g) if **g == **algebra => Ok(()),
            other => Err(Error::AlgebraMismatch(other.name().into(), algebra.name().into())),
        }
    }

    /// Exterior derivative in the left-invariant calculus of `complex`.
    ///
    /// The derivative of a top-degree form is the empty form of degree
    /// `rank + 1`.
    pub fn differential(&self, complex: &CoframeComplex) -> Result<Self> {
        if complex.rank() != self.rank {
            return Err(Error::ShapeMismatch {
                rows: complex.rank(),
                cols: self.rank,
            });
        }
        let mut out = Self {
            rank: self.rank,
            degree: self.degree + 1,
            space: self.space.clone(),
            terms: BTreeMap::new(),
        };
        for (blade, value) in &self.terms {
            for (db, coeff) in d_blade(*blade, complex) {
                let c = S::from_rational(&coeff);
                out.add_term(db, value.iter().map(|x| x.clone() * c.clone()).collect());
            }
        }
        Ok(out)
    }

    /// `Θ = dθ + ½[θ,θ]`.
    pub fn curvature(&self, complex: &CoframeComplex) -> Result<Self> {
        self.require_degree(1)?;
        let half = S::ratio(1, 2);
        self.differential(complex)?.add(&self.bracket(self)?.scale(&half))
    }

    /// `CS(θ) = ⟨θ, dθ⟩ + ⅓⟨θ, [θ,θ]⟩`.
    pub fn chern_simons(&self, form: &BilinearForm, complex: &CoframeComplex) -> Result<Self> {
        self.require_degree(1)?;
        let third = S::ratio(1, 3);
        let quadratic = self.pairing(&self.differential(complex)?, form)?;
        let cubic = self.pairing(&self.bracket(self)?, form)?;
        quadratic.add(&cubic.scale(&third))
    }

    /// The same form written as `⟨θ, Θ⟩ − ⅙⟨θ, [θ,θ]⟩`.
    pub fn chern_simons_via_curvature(&self, form: &BilinearForm, complex: &CoframeComplex) -> Result<Self> {
        self.require_degree(1)?;
        let sixth = S::ratio(1, 6);
        let main = self.pairing(&self.curvature(complex)?, form)?;
        let cubic = self.pairing(&self.bracket(self)?, form)?;
        main.sub(&cubic.scale(&sixth))
    }

    fn require_degree(&self, degree: usize) -> Result<()> {
        if self.degree == degree {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("expected a {degree}-form, got degree {}", self.degree)))
        }
    }

    /// `(θ^⊤, θ^⊥)`, both valued in the ambient algebra.
    pub fn decompose(&self, d: &OrthogonalDecomposition) -> Result<(Self, Self)> {
        self.require_algebra(d.ambient())?;
        let top = self.apply_linear(&d.projector_top().map(S::from_rational), self.space.clone())?;
        let perp = self.apply_linear(&d.projector_perp().map(S::from_rational), self.space.clone())?;
        Ok((top, perp))
    }

    /// `CS(θ) − CS(θ^⊤) − ⟨θ^⊥, Θ^⊥⟩`, which vanishes whenever
    /// `[θ^⊥, θ^⊥]` is valued in the subalgebra.
    ///
    /// Errors with [`Error::PreconditionViolated`] naming the first coframe
    /// pair and ambient basis element where `[θ^⊥, θ^⊥]` leaves it.
    pub fn blindness_residual(
        &self,
        d: &OrthogonalDecomposition,
        form: &BilinearForm,
        complex: &CoframeComplex,
        tol: f64,
    ) -> Result<Self> {
        self.require_degree(1)?;
        let (top, perp) = self.decompose(d)?;
        let perp_sq = perp.bracket(&perp)?;
        let outside = perp_sq.apply_linear(&d.projector_perp().map(S::from_rational), self.space.clone())?;
        for (blade, value) in outside.terms() {
            if let Some(component) = value.iter().position(|x| !x.is_negligible(tol)) {
                let mut idx = blade.indices();
                let (i, j) = (idx.next().unwrap_or(0), idx.next().unwrap_or(0));
                return Err(Error::PreconditionViolated { i, j, component });
            }
        }
        let curvature_perp = self
            .curvature(complex)?
            .apply_linear(&d.projector_perp().map(S::from_rational), self.space.clone())?;
        let lhs = self.chern_simons(form, complex)?;
        let rhs = top.chern_simons(form, complex)?.add(&perp.pairing(&curvature_perp, form)?)?;
        lhs.sub(&rhs)
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ValuedForm<T> {
        let mut out = ValuedForm::<T> {
            rank: self.rank,
            degree: self.degree,
            space: self.space.clone(),
            terms: BTreeMap::new(),
        };
        for (b, v) in &self.terms {
            out.add_term(*b, v.iter().map(&f).collect());
        }
        out
    }

    pub fn to_f64(&self) -> ValuedForm<f64> {
        self.map_scalar(S::to_f64)
    }
}

impl ValuedForm<Rational> {
    pub fn to_scalar<T: Scalar>(&self) -> ValuedForm<T> {
        self.map_scalar(T::from_rational)
    }
}

/// `d(ω^{i₁}∧…∧ω^{i_p}) = Σ_r (−1)^r ω^{i₁}∧…∧dω^{i_r}∧…∧ω^{i_p}`.
fn d_blade(blade: Blade, complex: &CoframeComplex) -> Vec<(Blade, Rational)> {
    let mut out: BTreeMap<Blade, Rational> = BTreeMap::new();
    let indices: Vec<usize> = blade.indices().collect();
    for (r, &i) in indices.iter().enumerate() {
        for (two, coeff) in complex.d_generator(i) {
            let mut word: Vec<usize> = indices[..r].to_vec();
            word.extend(two.indices());
            word.extend_from_slice(&indices[r + 1..]);
            if let Some((b, sign)) = Blade::from_indices(&word) {
                let mut c = coeff.clone();
                if (r % 2 == 1) != (sign < 0) {
                    c = -c;
                }
                *out.entry(b).or_default() += c;
            }
        }
    }
    out.into_iter().filter(|(_, c)| !num_traits::Zero::is_zero(c)).collect()
}

impl<S: Scalar> fmt::Debug for ValuedForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ValuedForm<{}; deg {}> {{", self.space.name(), self.degree)?;
        for (i, (b, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {:?}: {:?}", b.indices().collect::<Vec<_>>(), v)?;
        }
        f.write_str(" }")
    }
}
