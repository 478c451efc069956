//! Levi-Civita connections of constant metrics on a coframe.
//!
//! A metric `g = Σ G_ij ω^i ω^j` with constant `G` is brought to an
//! orthonormal coframe `e = Aω` with `g = Σ η_a (e^a)²`, `η_a = ±1`. The
//! connection matrix `θ^a_b` solves
//!
//! * torsion-freeness `de^a + θ^a_b ∧ e^b = 0`, and
//! * metric compatibility: `θ_ab = η_a θ^a_b` is antisymmetric,
//!
//! which for constant coefficients is a square linear system. Entries are
//! reported as 1-forms in the original coframe `ω`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::coframe::{CoframeComplex, ValueSpace, ValuedForm};
use crate::error::{Error, Result};
use crate::lie::{registry, LieAlgebra};
use crate::linalg::RMat;
use crate::scalar::{format_rational, int, Rational, Scalar};

/// A constant metric on a coframe together with an orthonormalizing frame.
#[derive(Debug, Clone)]
pub struct MetricSpec {
    complex: CoframeComplex,
    gram: RMat,
    /// `e^a = Σ_i frame[a][i] ω^i` is orthonormal.
    frame: RMat,
    eta: Vec<i64>,
}

impl MetricSpec {
    /// Orthonormalizes `gram` by an unpivoted `LDLᵀ` factorization. Fails
    /// with [`Error::NotOrthonormalizable`] on a zero pivot or when a pivot
    /// is not `±` the square of a rational.
    pub fn new(complex: CoframeComplex, gram: RMat) -> Result<Self> {
        let n = complex.rank();
        check_gram_shape(&gram, n)?;
        let mut l = RMat::identity(n);
        let mut d = vec![Rational::zero(); n];
        for j in 0..n {
            let mut dj = gram[(j, j)].clone();
            for k in 0..j {
                dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
            }
            if dj.is_zero() {
                return Err(Error::NotOrthonormalizable(format!("zero pivot at index {j}")));
            }
            for i in j + 1..n {
                let mut v = gram[(i, j)].clone();
                for k in 0..j {
                    v -= &l[(i, k)] * &l[(j, k)] * &d[k];
                }
                l[(i, j)] = v / &dj;
            }
            d[j] = dj;
        }
        let mut frame = l.transpose();
        let mut eta = Vec::with_capacity(n);
        for (a, da) in d.iter().enumerate() {
            let s = da.abs().sqrt().ok_or_else(|| {
                Error::NotOrthonormalizable(format!("pivot {} is not a rational square", format_rational(da)))
            })?;
            for i in 0..n {
                frame[(a, i)] = &frame[(a, i)] * &s;
            }
            eta.push(if da.is_positive() { 1 } else { -1 });
        }
        Ok(Self {
            complex,
            gram,
            frame,
            eta,
        })
    }

    /// Uses the given orthonormal coframe `e = frame · ω` with signs `η`;
    /// the metric is `frameᵀ diag(η) frame`.
    pub fn with_orthonormal_coframe(complex: CoframeComplex, frame: RMat, eta: Vec<i64>) -> Result<Self> {
        let n = complex.rank();
        check_gram_shape(&frame, n)?;
        if eta.len() != n || eta.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidConfig(format!("η must have {n} entries equal to ±1")));
        }
        if frame.determinant().is_zero() {
            return Err(Error::SingularSystem);
        }
        let eta_m = RMat::from_fn(n, n, |i, j| if i == j { int(eta[i]) } else { Rational::zero() });
        let gram = &(&frame.transpose() * &eta_m) * &frame;
        Ok(Self {
            complex,
            gram,
            frame,
            eta,
        })
    }

    /// `Σ η_a (s_a ω^a)²`: orthonormal coframe `(s_a ω^a)`.
    pub fn diagonal(complex: CoframeComplex, scales: &[Rational], eta: Vec<i64>) -> Result<Self> {
        let n = complex.rank();
        if scales.len() != n {
            return Err(Error::ShapeMismatch {
                rows: scales.len(),
                cols: n,
            });
        }
        let frame = RMat::from_fn(n, n, |i, j| if i == j { scales[i].clone() } else { Rational::zero() });
        Self::with_orthonormal_coframe(complex, frame, eta)
    }

    pub fn complex(&self) -> &CoframeComplex {
        &self.complex
    }

    pub fn gram(&self) -> &RMat {
        &self.gram
    }

    pub fn frame(&self) -> &RMat {
        &self.frame
    }

    pub fn eta(&self) -> &[i64] {
        &self.eta
    }

    /// `(p, q)`: numbers of positive and negative directions.
    pub fn signature(&self) -> (usize, usize) {
        let q = self.eta.iter().filter(|&&s| s < 0).count();
        (self.eta.len() - q, q)
    }

    /// The structure-constant complex of the orthonormal coframe.
    pub fn orthonormal_complex(&self) -> Result<CoframeComplex> {
        let labels = (1..=self.complex.rank()).map(|a| format!("e{a}")).collect();
        self.complex.change_frame(&self.frame, labels)
    }

    /// The algebra `so(η)` in which the connection takes values.
    pub fn structure_algebra(&self) -> Result<Arc<LieAlgebra>> {
        match self.eta.as_slice() {
            [1, 1, 1] => registry::algebra("so3"),
            [1, 1, -1] => registry::algebra("so21"),
            eta => {
                let name = format!("so({})", eta.iter().map(i64::to_string).collect::<Vec<_>>().join(","));
                Ok(Arc::new(registry::so_eta(&name, eta)?))
            }
        }
    }
}

fn check_gram_shape(m: &RMat, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::ShapeMismatch {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

/// A matrix of constant-coefficient 1-forms `θ^a_b = Σ_k c^a_{bk} ω^k`.
#[derive(Clone, PartialEq, Eq)]
pub struct ConnectionMatrix {
    n: usize,
    eta: Vec<i64>,
    /// `c^a_{bk}` at `(a * n + b) * n + k`.
    coeffs: Vec<Rational>,
}

impl ConnectionMatrix {
    /// `entries[a][b][k]` is the `ω^k` coefficient of `θ^a_b`.
    pub fn new(eta: Vec<i64>, entries: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = eta.len();
        if entries.len() != n || entries.iter().any(|row| row.len() != n || row.iter().any(|e| e.len() != n)) {
            return Err(Error::ShapeMismatch {
                rows: entries.len(),
                cols: n,
            });
        }
        Ok(Self {
            n,
            eta,
            coeffs: entries.into_iter().flatten().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn eta(&self) -> &[i64] {
        &self.eta
    }

    /// Coefficients of `θ^a_b` on `ω^0, …, ω^{n−1}`.
    pub fn entry(&self, a: usize, b: usize) -> &[Rational] {
        let start = (a * self.n + b) * self.n;
        &self.coeffs[start..start + self.n]
    }

    pub fn coefficient(&self, a: usize, b: usize, k: usize) -> &Rational {
        &self.coeffs[(a * self.n + b) * self.n + k]
    }

    /// `θ^a_b` with `ω^k` component replaced; used for perturbation checks.
    pub fn with_coefficient(&self, a: usize, b: usize, k: usize, value: Rational) -> Self {
        let mut out = self.clone();
        out.coeffs[(a * self.n + b) * self.n + k] = value;
        out
    }

    /// The connection as an `so(η)`-valued 1-form on the original coframe.
    pub fn to_valued_form(&self, algebra: &Arc<LieAlgebra>) -> Result<ValuedForm<Rational>> {
        if algebra.matrix_size() != self.n {
            return Err(Error::ShapeMismatch {
                rows: algebra.matrix_size(),
                cols: self.n,
            });
        }
        let mut terms = Vec::with_capacity(self.n);
        for k in 0..self.n {
            let m = RMat::from_fn(self.n, self.n, |a, b| self.coefficient(a, b, k).clone());
            terms.push((vec![k], algebra.coordinates(&m, 0.0)?));
        }
        ValuedForm::from_terms(self.n, 1, ValueSpace::Algebra(Arc::clone(algebra)), terms)
    }

    /// Renders entries as linear combinations of the coframe labels.
    pub fn display<'a>(&'a self, labels: &'a [String]) -> impl fmt::Display + 'a {
        DisplayConnection { c: self, labels }
    }
}

impl fmt::Debug for ConnectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.n).map(|k| format!("w{k}")).collect();
        let shown = write!(f, "{}", self.display(&labels));
        shown
    }
}

struct DisplayConnection<'a> {
    c: &'a ConnectionMatrix,
    labels: &'a [String],
}

impl fmt::Display for DisplayConnection<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.c.n;
        for a in 0..n {
            let cells: Vec<String> = (0..n).map(|b| linear_combination(self.c.entry(a, b), self.labels)).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `3κ − 1/2ξ`-style rendering of `Σ c_k label_k`.
pub fn linear_combination(coeffs: &[Rational], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, label) in coeffs.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let mag = c.abs();
        let body = if mag.is_one() { label.clone() } else { format!("{}{label}", format_rational(&mag)) };
        match (out.is_empty(), negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Order in which the unknowns `θ_ab(e_c)`, `a < b`, are numbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownOrder {
    /// Pair `(a, b)` outer, component `c` inner.
    PairMajor,
    /// Component `c` outer, pair `(a, b)` inner.
    ComponentMajor,
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// The Levi-Civita connection of `metric` in its orthonormal gauge.
pub fn levi_civita_coframe(metric: &MetricSpec) -> Result<ConnectionMatrix> {
    levi_civita_coframe_ordered(metric, UnknownOrder::PairMajor)
}

pub fn levi_civita_coframe_ordered(metric: &MetricSpec, order: UnknownOrder) -> Result<ConnectionMatrix> {
    let n = metric.complex.rank();
    let ortho = metric.orthonormal_complex()?;
    let eta = &metric.eta;
    let pairs = pairs(n);
    let np = pairs.len();
    let unknown = |p: usize, c: usize| match order {
        UnknownOrder::PairMajor => p * n + c,
        UnknownOrder::ComponentMajor => c * np + p,
    };
    // Γ^a_{cb} = η_a θ_ab(e_c) = ± η_a · x[pair(a,b), c].
    let gamma = |a: usize, c: usize, b: usize| -> Option<(usize, Rational)> {
        if a == b {
            return None;
        }
        let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
        let p = pairs.iter().position(|&q| q == (lo, hi)).expect("pair exists");
        Some((unknown(p, c), int(sign * eta[a])))
    };
    let m = n * np;
    let mut lhs = RMat::zeros(m, m);
    let mut rhs = RMat::zeros(m, 1);
    let mut row = 0;
    for a in 0..n {
        for &(c, d) in &pairs {
            // Γ^a_{cd} − Γ^a_{dc} = f^a_{cd}
            if let Some((u, s)) = gamma(a, c, d) {
                lhs[(row, u)] += s;
            }
            if let Some((u, s)) = gamma(a, d, c) {
                lhs[(row, u)] -= s;
            }
            rhs[(row, 0)] = ortho.structure_constant(c, d, a).clone();
            row += 1;
        }
    }
    let x = lhs.solve(&rhs, 0.0)?;
    // θ^a_b = Σ_c Γ^a_{cb} e^c = Σ_k (Σ_c Γ^a_{cb} frame[c][k]) ω^k
    let mut entries = vec![vec![vec![Rational::zero(); n]; n]; n];
    for (a, row) in entries.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            for c in 0..n {
                let Some((u, s)) = gamma(a, c, b) else { continue };
                let g = &x[(u, 0)] * &s;
                if g.is_zero() {
                    continue;
                }
                for (k, slot) in entry.iter_mut().enumerate() {
                    *slot += &g * &metric.frame[(c, k)];
                }
            }
        }
    }
    ConnectionMatrix::new(eta.clone(), entries)
}

/// Residuals of the two defining equations.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionResiduals {
    /// Largest coefficient of `de^a + θ^a_b ∧ e^b`.
    pub torsion: Rational,
    /// Largest coefficient of `η_a θ^a_b + η_b θ^b_a`.
    pub antisymmetry: Rational,
}

impl ConnectionResiduals {
    pub fn max_f64(&self) -> f64 {
        self.torsion.to_f64().max(self.antisymmetry.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.torsion.is_zero() && self.antisymmetry.is_zero()
    }
}

/// Torsion and antisymmetry residuals of `c` for `metric`.
pub fn verify_connection(c: &ConnectionMatrix, metric: &MetricSpec) -> Result<ConnectionResiduals> {
    let n = metric.complex.rank();
    if c.n != n || c.eta != metric.eta {
        return Err(Error::ShapeMismatch { rows: c.n, cols: n });
    }
    let ortho = metric.orthonormal_complex()?;
    let inv = metric.frame.inverse(0.0)?;
    // Γ^a_{cb}: coefficient of e^c in θ^a_b, using ω^k = Σ_c inv[k][c] e^c.
    let gamma = |a: usize, cc: usize, b: usize| -> Rational {
        (0..n).fold(Rational::zero(), |acc, k| acc + c.coefficient(a, b, k) * &inv[(k, cc)])
    };
    let mut torsion = Rational::zero();
    for a in 0..n {
        for (p, q) in pairs(n) {
            let r = gamma(a, p, q) - gamma(a, q, p) - ortho.structure_constant(p, q, a);
            torsion = torsion.max(r.abs());
        }
    }
    let mut antisymmetry = Rational::zero();
    for a in 0..n {
        for b in a..n {
            for k in 0..n {
                let r = c.coefficient(a, b, k) * int(metric.eta[a]) + c.coefficient(b, a, k) * int(metric.eta[b]);
                antisymmetry = antisymmetry.max(r.abs());
            }
        }
    }
    Ok(ConnectionResiduals { torsion, antisymmetry })
}

/// `g_λ = ξ² + ρ² − λ²κ²` on the `su(2)` coframe, orthonormal coframe
/// `(ξ, ρ, λκ)`.
pub fn berger_lorentz_metric(lambda: &Rational) -> Result<MetricSpec> {
    if lambda.is_zero() {
        return Err(Error::InvalidConfig("λ must be nonzero".into()));
    }
    MetricSpec::diagonal(CoframeComplex::su2(), &[Rational::one(), Rational::one(), lambda.clone()], vec![1, 1, -1])
}

/// `¼(ω₁² + ω₂² + ψ²)` on the `so(3)` coframe, orthonormal coframe
/// `½(ω₁, ω₂, ψ)`.
pub fn round_rp3_metric() -> MetricSpec {
    let half = crate::scalar::rat(1, 2);
    MetricSpec::diagonal(CoframeComplex::so3(), &[half.clone(), half.clone(), half], vec![1, 1, 1])
        .expect("diagonal frame is invertible")
}
