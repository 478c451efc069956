use super::form::PolyForm;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::{rat, PiMultiple, Rational};

/// A square matrix of polynomial forms sharing one degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormMatrix {
    size: usize,
    nvars: usize,
    degree: usize,
    entries: Vec<PolyForm>,
}

impl FormMatrix {
    pub fn zero(size: usize, nvars: usize, degree: usize) -> Result<Self> {
        let z = PolyForm::zero(nvars, degree)?;
        Ok(Self {
            size,
            nvars,
            degree,
            entries: vec![z; size * size],
        })
    }

    /// Row-major entries.
    pub fn from_entries(size: usize, entries: Vec<PolyForm>) -> Result<Self> {
        if entries.len() != size * size || size == 0 {
            return Err(Error::ShapeMismatch {
                rows: entries.len(),
                cols: size * size,
            });
        }
        let (nvars, degree) = (entries[0].nvars(), entries[0].degree());
        if entries.iter().any(|e| e.nvars() != nvars || e.degree() != degree) {
            return Err(Error::InvalidConfig("matrix entries differ in variables or degree".into()));
        }
        Ok(Self {
            size,
            nvars,
            degree,
            entries,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize, j: usize) -> &PolyForm {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[PolyForm] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PolyForm::is_zero)
    }

    fn map(&self, f: impl Fn(&PolyForm) -> PolyForm) -> Self {
        let entries: Vec<PolyForm> = self.entries.iter().map(f).collect();
        let degree = entries[0].degree();
        Self {
            size: self.size,
            nvars: self.nvars,
            degree,
            entries,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::ShapeMismatch {
                rows: other.size,
                cols: self.size,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Self::from_entries(self.size, entries)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = self.entries[j * n + i].clone();
            }
        }
        out
    }

    /// Entrywise exterior derivative.
    pub fn d(&self) -> Self {
        self.map(PolyForm::d)
    }

    /// Matrix product with wedge products of entries.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let n = self.size;
        if other.size != n {
            return Err(Error::ShapeMismatch {
                rows: other.size,
                cols: n,
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.get(i, 0).wedge(other.get(0, j))?;
                for k in 1..n {
                    acc = acc.add(&self.get(i, k).wedge(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Self::from_entries(n, entries)
    }

    pub fn trace(&self) -> Result<PolyForm> {
        (1..self.size).try_fold(self.get(0, 0).clone(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn restrict_to_sphere(&self) -> Self {
        self.map(PolyForm::restrict_to_sphere)
    }

    pub fn reduce_mod_sphere(&self) -> Self {
        self.map(PolyForm::reduce_mod_sphere)
    }
}

/// Which group the polynomial matrix map lands in; selects how the
/// inverse is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// `σᵀσ = I`; the inverse is the transpose.
    Orthogonal,
    /// `det σ = 1`; the inverse is the adjugate.
    Unimodular,
}

/// Where the group condition is required to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// All of `ℝ^N`; checked exactly.
    Affine,
    /// The unit sphere `S^{N−1}`; checked modulo `|x|² = 1`, and pulled-back
    /// forms are restricted to the sphere.
    UnitSphere,
    /// A submanifold the caller vouches for; not checked symbolically.
    Trusted,
}

/// A polynomial map `ℝ^N ⊇ M → G ⊂ GL(n)` stored as an `n×n` matrix of
/// polynomials.
#[derive(Clone, Debug)]
pub struct PolyMatrixMap {
    size: usize,
    nvars: usize,
    entries: Vec<Polynomial>,
    group: GroupKind,
    domain: Domain,
}

impl PolyMatrixMap {
    /// Validates the group condition on the domain and fails with
    /// [`Error::NotInGroup`] otherwise.
    pub fn new(size: usize, entries: Vec<Polynomial>, group: GroupKind, domain: Domain) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(Error::ShapeMismatch {
                rows: entries.len(),
                cols: size * size,
            });
        }
        let nvars = entries[0].nvars();
        if entries.iter().any(|p| p.nvars() != nvars) {
            return Err(Error::InvalidConfig("matrix entries differ in variable count".into()));
        }
        let map = Self {
            size,
            nvars,
            entries,
            group,
            domain,
        };
        map.check_group()?;
        Ok(map)
    }

    fn check_group(&self) -> Result<()> {
        let reduce = |p: Polynomial| match self.domain {
            Domain::UnitSphere => p.reduce_mod_sphere(),
            _ => p,
        };
        if self.domain == Domain::Trusted {
            return Ok(());
        }
        let n = self.size;
        match self.group {
            GroupKind::Orthogonal => {
                for i in 0..n {
                    for j in i..n {
                        let mut s = Polynomial::zero(self.nvars);
                        for k in 0..n {
                            s = &s + &(self.get(k, i) * self.get(k, j));
                        }
                        let target = if i == j { Polynomial::one(self.nvars) } else { Polynomial::zero(self.nvars) };
                        let residual = reduce(&s - &target);
                        if !residual.is_zero() {
                            return Err(Error::NotInGroup(format!("(σᵀσ − I)[{i}][{j}] = {residual}")));
                        }
                    }
                }
            }
            GroupKind::Unimodular => {
                let residual = reduce(&self.determinant() - &Polynomial::one(self.nvars));
                if !residual.is_zero() {
                    return Err(Error::NotInGroup(format!("det σ − 1 = {residual}")));
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn determinant(&self) -> Polynomial {
        let rows: Vec<Vec<Polynomial>> = (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j).clone()).collect())
            .collect();
        poly_determinant(&rows)
    }

    /// `σ⁻¹` on the domain: the transpose or the adjugate.
    pub fn inverse_entries(&self) -> Vec<Polynomial> {
        let n = self.size;
        match self.group {
            GroupKind::Orthogonal => (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect(),
            GroupKind::Unimodular => {
                let mut out = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        // adj[i][j] = (−1)^{i+j} det(σ without row j, column i)
                        let minor: Vec<Vec<Polynomial>> = (0..n)
                            .filter(|&r| r != j)
                            .map(|r| (0..n).filter(|&c| c != i).map(|c| self.get(r, c).clone()).collect())
                            .collect();
                        let d = poly_determinant(&minor);
                        out.push(if (i + j) % 2 == 0 { d } else { -&d });
                    }
                }
                out
            }
        }
    }

    /// The matrix of functions `σ` as 0-forms.
    pub fn as_form_matrix(&self) -> FormMatrix {
        let entries = self.entries.iter().cloned().map(PolyForm::function).collect();
        FormMatrix::from_entries(self.size, entries).expect("square")
    }

    /// `σ*μ = σ⁻¹ dσ`, restricted to the sphere on [`Domain::UnitSphere`].
    pub fn mc_pullback(&self) -> FormMatrix {
        let inv = FormMatrix::from_entries(
            self.size,
            self.inverse_entries().into_iter().map(PolyForm::function).collect(),
        )
        .expect("square");
        let theta = inv.wedge(&self.as_form_matrix().d()).expect("same size");
        match self.domain {
            Domain::UnitSphere => theta.restrict_to_sphere(),
            _ => theta,
        }
    }

    /// `d(σ*μ) + σ*μ ∧ σ*μ`, which vanishes on the domain.
    pub fn maurer_cartan_residual(&self) -> FormMatrix {
        let theta = self.mc_pullback();
        let r = theta.d().add(&theta.wedge(&theta).expect("same size")).expect("same shape");
        match self.domain {
            Domain::UnitSphere => r.restrict_to_sphere(),
            _ => r,
        }
    }

    /// `σ ∘ φ` for `φ: ℝ^M → ℝ^N`, with a new domain description.
    pub fn compose(&self, map: &[Polynomial], domain: Domain) -> Result<Self> {
        let entries = self.entries.iter().map(|p| p.substitute(map)).collect::<Result<_>>()?;
        Self::new(self.size, entries, self.group, domain)
    }
}

pub(crate) fn poly_determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    match m.len() {
        0 => panic!("empty determinant"),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Polynomial::zero(m[0][0].nvars());
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let t = &m[0][j] * &poly_determinant(&minor);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

/// A polynomial form scaled by a power of `π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledForm {
    pub form: PolyForm,
    pub pi_power: i32,
}

/// `scale · tr(θ∧dθ + ⅔ θ∧θ∧θ)` for a matrix of 1-forms, with the rational
/// part of `scale` folded into the coefficients.
pub fn trace_cs_poly(theta: &FormMatrix, scale: &PiMultiple) -> Result<ScaledForm> {
    if theta.degree() != 1 {
        return Err(Error::InvalidConfig(format!("expected a matrix of 1-forms, got degree {}", theta.degree())));
    }
    let dtheta = theta.d();
    let theta2 = theta.wedge(theta)?;
    let cubic = theta2.wedge(theta)?.scale(&rat(2, 3));
    let integrand = theta.wedge(&dtheta)?.add(&cubic)?;
    let form = integrand.trace()?.scale(&scale.coeff);
    Ok(ScaledForm {
        form,
        pi_power: scale.pi_power,
    })
}

impl ScaledForm {
    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }
}
