use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::polynomial::{CompiledPolynomial, Polynomial};
use crate::coframe::{Blade, MAX_RANK};
use crate::error::{Error, Result};
use crate::scalar::{int, Rational};

/// A differential form on `ℝ^N` with polynomial coefficients,
/// `Σ_I p_I dx^I` over increasing multi-indices `I`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyForm {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Blade, Polynomial>,
}

impl PolyForm {
    pub fn zero(nvars: usize, degree: usize) -> Result<Self> {
        if nvars > MAX_RANK {
            return Err(Error::InvalidConfig(format!("at most {MAX_RANK} variables are supported")));
        }
        if degree > nvars {
            return Err(Error::DegreeOverflow(degree, nvars));
        }
        Ok(Self {
            nvars,
            degree,
            terms: BTreeMap::new(),
        })
    }

    /// The 0-form `p`.
    pub fn function(p: Polynomial) -> Self {
        let mut f = Self::zero(p.nvars(), 0).expect("0-form always fits");
        f.add_blade(Blade::EMPTY, p);
        f
    }

    /// `dx_i` (0-based `i`).
    pub fn dx(nvars: usize, i: usize) -> Self {
        let mut f = Self::zero(nvars, 1).expect("1-form fits");
        f.add_blade(Blade::single(i), Polynomial::one(nvars));
        f
    }

    /// `Σ_i coeffs[i] dx_i`.
    pub fn one_form(coeffs: &[Polynomial]) -> Self {
        let n = coeffs.len();
        let mut f = Self::zero(n, 1).expect("1-form fits");
        for (i, c) in coeffs.iter().enumerate() {
            f.add_blade(Blade::single(i), c.clone());
        }
        f
    }

    /// Adds `p · dx_{indices}`, normalizing the index order.
    pub fn add_indexed(&mut self, indices: &[usize], p: Polynomial) -> Result<()> {
        if indices.len() != self.degree {
            return Err(Error::ShapeMismatch {
                rows: indices.len(),
                cols: self.degree,
            });
        }
        if p.nvars() != self.nvars || indices.iter().any(|&i| i >= self.nvars) {
            return Err(Error::ShapeMismatch {
                rows: p.nvars(),
                cols: self.nvars,
            });
        }
        if let Some((b, s)) = Blade::from_indices(indices) {
            self.add_blade(b, p.scale(&int(s.into())));
        }
        Ok(())
    }

    fn add_blade(&mut self, b: Blade, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&b) {
            Some(existing) => &existing + &p,
            None => p,
        };
        if !merged.is_zero() {
            self.terms.insert(b, merged);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as (increasing indices, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Polynomial)> {
        self.terms.iter().map(|(b, p)| (b.indices().collect(), p))
    }

    /// Coefficient of `dx_{indices}`, sign-adjusted for the given order.
    pub fn coefficient(&self, indices: &[usize]) -> Polynomial {
        match Blade::from_indices(indices) {
            Some((b, s)) => self
                .terms
                .get(&b)
                .map_or_else(|| Polynomial::zero(self.nvars), |p| p.scale(&int(s.into()))),
            None => Polynomial::zero(self.nvars),
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(Error::ShapeMismatch {
                rows: other.nvars * 100 + other.degree,
                cols: self.nvars * 100 + self.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (b, p) in &other.terms {
            out.add_blade(*b, p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coefficients(|p| p.scale(c))
    }

    /// `q · α` for a polynomial `q`.
    pub fn mul_function(&self, q: &Polynomial) -> Self {
        self.map_coefficients(|p| p * q)
    }

    fn map_coefficients(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        let mut out = Self {
            nvars: self.nvars,
            degree: self.degree,
            terms: BTreeMap::new(),
        };
        for (b, p) in &self.terms {
            out.add_blade(*b, f(p));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::ShapeMismatch {
                rows: other.nvars,
                cols: self.nvars,
            });
        }
        let degree = self.degree + other.degree;
        let mut out = Self {
            nvars: self.nvars,
            degree,
            terms: BTreeMap::new(),
        };
        if degree > self.nvars {
            return Ok(out);
        }
        for (ba, pa) in &self.terms {
            for (bb, pb) in &other.terms {
                if let Some((b, s)) = ba.wedge(*bb) {
                    out.add_blade(b, (pa * pb).scale(&int(s.into())));
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative. The derivative of a top-degree form is the
    /// empty form of degree `N + 1`.
    pub fn d(&self) -> Self {
        let mut out = Self {
            nvars: self.nvars,
            degree: self.degree + 1,
            terms: BTreeMap::new(),
        };
        for (b, p) in &self.terms {
            for j in 0..self.nvars {
                if let Some((nb, s)) = Blade::single(j).wedge(*b) {
                    out.add_blade(nb, p.partial(j).scale(&int(s.into())));
                }
            }
        }
        out
    }

    /// Interior product `ι_V α` with the vector field `V = Σ Vᵢ ∂ᵢ`.
    pub fn interior(&self, field: &[Polynomial]) -> Result<Self> {
        if field.len() != self.nvars {
            return Err(Error::ShapeMismatch {
                rows: field.len(),
                cols: self.nvars,
            });
        }
        let mut out = Self {
            nvars: self.nvars,
            degree: self.degree.saturating_sub(1),
            terms: BTreeMap::new(),
        };
        if self.degree == 0 {
            return Ok(out);
        }
        for (b, p) in &self.terms {
            for r in 0..self.degree {
                let (i, rest) = b.remove_position(r);
                let sign = if r % 2 == 0 { int(1) } else { int(-1) };
                out.add_blade(rest, (&field[i] * p).scale(&sign));
            }
        }
        Ok(out)
    }

    /// Pullback along `φ: ℝ^M → ℝ^N` given by `N` polynomials in `M`
    /// variables.
    pub fn pullback(&self, map: &[Polynomial]) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::ShapeMismatch {
                rows: map.len(),
                cols: self.nvars,
            });
        }
        let m = map.first().map_or(0, Polynomial::nvars);
        let differentials: Vec<PolyForm> = map
            .iter()
            .map(|phi| PolyForm::one_form(&(0..m).map(|j| phi.partial(j)).collect::<Vec<_>>()))
            .collect();
        let mut out = Self::zero(m, self.degree)?;
        for (b, p) in &self.terms {
            let mut term = PolyForm::function(p.substitute(map)?);
            for i in b.indices() {
                term = term.wedge(&differentials[i])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Exact value `α_x(v₁, …, v_k)`.
    pub fn evaluate(&self, point: &[Rational], vectors: &[Vec<Rational>]) -> Result<Rational> {
        if vectors.len() != self.degree || point.len() != self.nvars || vectors.iter().any(|v| v.len() != self.nvars) {
            return Err(Error::ShapeMismatch {
                rows: vectors.len(),
                cols: self.degree,
            });
        }
        let mut total = Rational::zero();
        for (b, p) in &self.terms {
            let idx: Vec<usize> = b.indices().collect();
            let minor: Vec<Vec<Rational>> = vectors.iter().map(|v| idx.iter().map(|&i| v[i].clone()).collect()).collect();
            total += p.eval(point) * determinant(&minor);
        }
        Ok(total)
    }

    /// Every coefficient reduced modulo `|x|² = 1`.
    pub fn reduce_mod_sphere(&self) -> Self {
        self.map_coefficients(Polynomial::reduce_mod_sphere)
    }

    /// Canonical representative of the pullback to the unit sphere
    /// `S^{N−1} ⊂ ℝ^N`.
    ///
    /// Computes `α − ν∧ι_E α` with `ν = Σ xᵢdxᵢ` and `E = Σ xᵢ∂ᵢ`, then
    /// reduces coefficients so `x_N` has degree at most one. Two ambient forms
    /// with the same restriction give identical results.
    pub fn restrict_to_sphere(&self) -> Self {
        if self.degree == 0 {
            return self.reduce_mod_sphere();
        }
        let euler: Vec<Polynomial> = (0..self.nvars).map(|i| Polynomial::var(self.nvars, i)).collect();
        let nu = PolyForm::one_form(&euler);
        let normal_part = nu
            .wedge(&self.interior(&euler).expect("field length matches"))
            .expect("same variables");
        self.sub(&normal_part).expect("same shape").reduce_mod_sphere()
    }

    pub fn compile(&self) -> CompiledForm {
        CompiledForm {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(b, p)| (b.indices().collect(), p.compile())).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("polyform vars {} degree {}\n", self.nvars, self.degree);
        let mut lines: Vec<(Vec<usize>, &Polynomial)> = self.terms().collect();
        lines.sort_by(|a, b| a.0.cmp(&b.0));
        for (idx, p) in lines {
            let name = if idx.is_empty() {
                "1".to_string()
            } else {
                idx.iter().map(|i| format!("dx{}", i + 1)).collect::<Vec<_>>().join("^")
            };
            out.push_str(&format!("{name} : {p}\n"));
        }
        out
    }

    /// Parses text produced by [`PolyForm::to_text`].
    ///
    /// ```text
    /// polyform vars 4 degree 2
    /// dx1^dx3 : 2
    /// dx2^dx4 : -2*x1
    /// ```
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        let ["polyform", "vars", nvars, "degree", degree] = tokens.as_slice() else {
            return Err(Error::parse(hline, "expected `polyform vars N degree D`"));
        };
        let nvars: usize = nvars.parse().map_err(|_| Error::parse(hline, "invalid variable count"))?;
        let degree: usize = degree.parse().map_err(|_| Error::parse(hline, "invalid degree"))?;
        if nvars == 0 || nvars > MAX_RANK {
            return Err(Error::parse(hline, format!("variable count must be in 1..={MAX_RANK}")));
        }
        let mut form = Self::zero(nvars, degree).map_err(|e| Error::parse(hline, e.to_string()))?;
        for (line, body) in lines {
            let (name, poly) = body
                .split_once(':')
                .ok_or_else(|| Error::parse(line, "expected `dxI^dxJ : POLYNOMIAL`"))?;
            let name = name.trim();
            let indices: Vec<usize> = if name == "1" {
                Vec::new()
            } else {
                name.split('^')
                    .map(|t| {
                        t.trim()
                            .strip_prefix("dx")
                            .and_then(|d| d.parse::<usize>().ok())
                            .filter(|&i| (1..=nvars).contains(&i))
                            .map(|i| i - 1)
                            .ok_or_else(|| Error::parse(line, format!("invalid differential `{t}`")))
                    })
                    .collect::<Result<_>>()?
            };
            if indices.len() != degree {
                return Err(Error::parse(line, format!("expected {degree} differentials, found {}", indices.len())));
            }
            let p = Polynomial::parse(poly, nvars).map_err(|e| Error::parse(line, e.to_string()))?;
            form.add_indexed(&indices, p)?;
        }
        Ok(form)
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Determinant by cofactor expansion; intended for `k ≤ 4`.
pub(crate) fn determinant(m: &[Vec<Rational>]) -> Rational {
    match m.len() {
        0 => Rational::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .filter(|&j| !m[0][j].is_zero())
            .map(|j| {
                let minor: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let t = &m[0][j] * determinant(&minor);
                if j % 2 == 0 {
                    t
                } else {
                    -t
                }
            })
            .fold(Rational::zero(), |a, b| a + b),
    }
}

fn determinant_f64(m: &[[f64; 3]; 3], k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
    }
}

/// A [`PolyForm`] of degree at most three flattened for `f64` evaluation.
#[derive(Debug, Clone)]
pub struct CompiledForm {
    nvars: usize,
    degree: usize,
    terms: Vec<(Vec<usize>, CompiledPolynomial)>,
}

impl CompiledForm {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `α_x(v₁, …, v_k)` for `k = degree ≤ 3`.
    pub fn evaluate(&self, x: &[f64], vectors: &[&[f64]]) -> f64 {
        assert!(self.degree <= 3 && vectors.len() == self.degree);
        let mut total = 0.0;
        let mut minor = [[0.0; 3]; 3];
        for (idx, p) in &self.terms {
            for (r, v) in vectors.iter().enumerate() {
                for (c, &i) in idx.iter().enumerate() {
                    minor[r][c] = v[i];
                }
            }
            let det = determinant_f64(&minor, self.degree);
            if det != 0.0 {
                total += p.eval(x) * det;
            }
        }
        total
    }
}
