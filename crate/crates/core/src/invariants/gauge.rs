//! Pointwise Chern–Simons forms of matrix-valued 1-forms, used where the
//! integrand is a gauge transform that is cheaper to evaluate than to
//! expand symbolically.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::poly::{trace_cs_poly, CompiledForm, CompiledPolynomial, FormMatrix, PolyMatrixMap};
use crate::quadrature::{grid_refinement_estimate, Chart, Refinement, ThreeFormIntegrand};
use crate::scalar::PiMultiple;

pub type FMat = Mat<f64>;

/// `tr(θ∧dθ + ⅔θ∧θ∧θ)(u, v, w)` from the values `θ(u), θ(v), θ(w)` and
/// `dθ(v,w), dθ(u,w), dθ(u,v)`.
pub fn trace_cs_pointwise(theta: [&FMat; 3], dtheta: [&FMat; 3]) -> f64 {
    let [a, b, c] = theta;
    let [vw, uw, uv] = dtheta;
    let quadratic = (a * vw).trace() - (b * uw).trace() + (c * uv).trace();
    // Σ_π sgn(π) tr(θ_π1 θ_π2 θ_π3) = 3(tr(abc) − tr(acb)) by cyclicity.
    let cubic = 3.0 * ((&(a * b) * c).trace() - (&(a * c) * b).trace());
    quadratic + 2.0 / 3.0 * cubic
}

/// `scale · CS(θ̂)` for `θ̂ = h⁻¹θh + h⁻¹dh`, evaluated pointwise from
/// compiled entries of `θ`, `dθ`, `h`, `h⁻¹` and their first partials.
pub struct GaugedChernSimons {
    n: usize,
    nvars: usize,
    h: Vec<CompiledPolynomial>,
    dh: Vec<Vec<CompiledPolynomial>>,
    hinv: Vec<CompiledPolynomial>,
    dhinv: Vec<Vec<CompiledPolynomial>>,
    theta: Vec<CompiledForm>,
    dtheta: Vec<CompiledForm>,
    scale: f64,
}

impl GaugedChernSimons {
    pub fn new(theta: &FormMatrix, h: &PolyMatrixMap, scale: &PiMultiple) -> Result<Self> {
        if theta.degree() != 1 {
            return Err(Error::InvalidConfig(format!("expected a matrix of 1-forms, got degree {}", theta.degree())));
        }
        if theta.size() != h.size() || theta.nvars() != h.nvars() {
            return Err(Error::ShapeMismatch {
                rows: theta.size(),
                cols: h.size(),
            });
        }
        let nvars = h.nvars();
        let partials = |entries: &[crate::poly::Polynomial]| {
            entries
                .iter()
                .map(|p| (0..nvars).map(|i| p.partial(i).compile()).collect())
                .collect()
        };
        let inverse = h.inverse_entries();
        Ok(Self {
            n: h.size(),
            nvars,
            h: h.entries().iter().map(|p| p.compile()).collect(),
            dh: partials(h.entries()),
            hinv: inverse.iter().map(|p| p.compile()).collect(),
            dhinv: partials(&inverse),
            theta: theta.entries().iter().map(|f| f.compile()).collect(),
            dtheta: theta.entries().iter().map(|f| f.d().compile()).collect(),
            scale: scale.to_f64(),
        })
    }

    fn values(&self, entries: &[CompiledPolynomial], x: &[f64]) -> FMat {
        FMat::from_fn(self.n, self.n, |i, j| entries[i * self.n + j].eval(x))
    }

    /// `Σ_i t_i ∂_i M(x)`.
    fn directional(&self, partials: &[Vec<CompiledPolynomial>], x: &[f64], t: &[f64]) -> FMat {
        FMat::from_fn(self.n, self.n, |i, j| {
            partials[i * self.n + j].iter().zip(t).map(|(p, ti)| if *ti == 0.0 { 0.0 } else { p.eval(x) * ti }).sum()
        })
    }

    fn one_form(&self, x: &[f64], t: &[f64]) -> FMat {
        FMat::from_fn(self.n, self.n, |i, j| self.theta[i * self.n + j].evaluate(x, &[t]))
    }

    fn two_form(&self, x: &[f64], s: &[f64], t: &[f64]) -> FMat {
        FMat::from_fn(self.n, self.n, |i, j| self.dtheta[i * self.n + j].evaluate(x, &[s, t]))
    }
}

impl ThreeFormIntegrand for GaugedChernSimons {
    fn ambient_dim(&self) -> usize {
        self.nvars
    }

    fn evaluate(&self, x: &[f64], u: &[f64], v: &[f64], w: &[f64]) -> Result<f64> {
        let h = self.values(&self.h, x);
        let hi = self.values(&self.hinv, x);
        let vectors = [u, v, w];
        let dh = vectors.map(|t| self.directional(&self.dh, x, t));
        let dhi = vectors.map(|t| self.directional(&self.dhinv, x, t));
        let th = vectors.map(|t| self.one_form(x, t));
        // θ̂(t) = h⁻¹θ(t)h + h⁻¹dh(t)
        let hat: Vec<FMat> = (0..3).map(|k| &(&(&hi * &th[k]) * &h) + &(&hi * &dh[k])).collect();
        // dθ̂ = dh⁻¹∧θh + h⁻¹dθh − h⁻¹θ∧dh + dh⁻¹∧dh, evaluated on (s, t).
        let dhat = |s: usize, t: usize| -> FMat {
            let wedge = |a: &FMat, b: &FMat, c: &FMat, d: &FMat| &(a * b) - &(c * d);
            let first = &wedge(&dhi[s], &th[t], &dhi[t], &th[s]) * &h;
            let second = &(&hi * &self.two_form(x, vectors[s], vectors[t])) * &h;
            let third = &hi * &wedge(&th[s], &dh[t], &th[t], &dh[s]);
            let fourth = wedge(&dhi[s], &dh[t], &dhi[t], &dh[s]);
            &(&(&first + &second) - &third) + &fourth
        };
        let (vw, uw, uv) = (dhat(1, 2), dhat(0, 2), dhat(0, 1));
        Ok(self.scale * trace_cs_pointwise([&hat[0], &hat[1], &hat[2]], [&vw, &uw, &uv]))
    }
}

/// Grid refinement of `∫ scale · tr(θ∧dθ + ⅔θ³)` for a polynomial matrix
/// of 1-forms.
pub fn integrate_trace_cs(theta: &FormMatrix, scale: &PiMultiple, chart: &Chart, levels: &[usize]) -> Result<Refinement> {
    let cs = trace_cs_poly(theta, &PiMultiple::new(scale.coeff.clone(), 0))?;
    let compiled = cs.form.compile();
    let factor = std::f64::consts::PI.powi(scale.pi_power);
    let integrand = (theta.nvars(), |x: &[f64], u: &[f64], v: &[f64], w: &[f64]| {
        Ok(factor * compiled.evaluate(x, &[u, v, w]))
    });
    grid_refinement_estimate(&integrand, chart, levels)
}
