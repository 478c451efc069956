//! Tensor-product Gauss–Legendre integration of 3-forms over `S³ ⊂ ℝ⁴` and
//! `SO(3) ⊂ ℝ⁹` through single full-measure charts.
//!
//! Point evaluations run in parallel; the weighted samples are reduced by
//! pairwise summation in grid order, so results are bit-for-bit
//! deterministic.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::CompiledForm;
use crate::scalar::{rat, PiMultiple};

/// Default number of Gauss–Legendre nodes per axis.
pub const DEFAULT_NODES: usize = 32;

/// Default refinement ladder.
pub const DEFAULT_LEVELS: [usize; 3] = [8, 16, 32];

/// Differences below `NOISE_FLOOR · max(1, |value|)` count as converged.
pub const NOISE_FLOOR: f64 = 1e-13;

/// A 3-form that can be evaluated pointwise on ambient tangent vectors.
pub trait ThreeFormIntegrand: Sync {
    fn ambient_dim(&self) -> usize;

    /// `α_x(u, v, w)`.
    fn evaluate(&self, x: &[f64], u: &[f64], v: &[f64], w: &[f64]) -> Result<f64>;
}

impl ThreeFormIntegrand for CompiledForm {
    fn ambient_dim(&self) -> usize {
        self.nvars()
    }

    fn evaluate(&self, x: &[f64], u: &[f64], v: &[f64], w: &[f64]) -> Result<f64> {
        if self.degree() != 3 {
            return Err(Error::Evaluation(format!("expected a 3-form, got degree {}", self.degree())));
        }
        Ok(CompiledForm::evaluate(self, x, &[u, v, w]))
    }
}

impl<F> ThreeFormIntegrand for (usize, F)
where
    F: Fn(&[f64], &[f64], &[f64], &[f64]) -> Result<f64> + Sync,
{
    fn ambient_dim(&self) -> usize {
        self.0
    }

    fn evaluate(&self, x: &[f64], u: &[f64], v: &[f64], w: &[f64]) -> Result<f64> {
        (self.1)(x, u, v, w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartKind {
    /// `(χ, θ, φ) ↦ (cos χ, sin χ cos θ, sin χ sin θ cos φ, sin χ sin θ sin φ)`
    /// on `(0,π)×(0,π)×(0,2π)`.
    S3Hyperspherical,
    /// `(α, β, γ) ↦ R_z(α) R_y(β) R_z(γ)` on `(0,2π)×(0,π)×(0,2π)`, written
    /// row-major into `ℝ⁹`.
    So3EulerZyz,
}

/// A parametrization of `S³` or `SO(3)` by a box, with analytic tangents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub kind: ChartKind,
    /// `+1` if the chart's coordinate order is the orientation integrated
    /// against, `−1` otherwise.
    pub orientation_sign: i8,
}

impl Chart {
    /// `S³` oriented so that `ξ∧ρ∧κ = ι_{−E} dx₁₂₃₄` is positive, i.e. by the
    /// inward normal. The coordinate order `(χ, θ, φ)` is outward.
    pub fn s3() -> Self {
        Self {
            kind: ChartKind::S3Hyperspherical,
            orientation_sign: -1,
        }
    }

    /// `SO(3)` oriented so that `ω₁∧ω₂∧ψ` is positive, where
    /// `RᵀdR = [[0,−ω₁,−ω₂],[ω₁,0,−ψ],[ω₂,ψ,0]]`.
    pub fn so3() -> Self {
        Self {
            kind: ChartKind::So3EulerZyz,
            orientation_sign: -1,
        }
    }

    pub fn with_orientation(self, sign: i8) -> Self {
        Self {
            orientation_sign: if sign < 0 { -1 } else { 1 },
            ..self
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ChartKind::S3Hyperspherical => "s3-hyperspherical",
            ChartKind::So3EulerZyz => "so3-euler-zyz",
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            ChartKind::S3Hyperspherical => 4,
            ChartKind::So3EulerZyz => 9,
        }
    }

    pub fn parameter_box(&self) -> [(f64, f64); 3] {
        match self.kind {
            ChartKind::S3Hyperspherical => [(0.0, PI), (0.0, PI), (0.0, 2.0 * PI)],
            ChartKind::So3EulerZyz => [(0.0, 2.0 * PI), (0.0, PI), (0.0, 2.0 * PI)],
        }
    }

    /// Riemannian volume of the image: `2π²` for the unit `S³`, `8π²` for
    /// `SO(3)` with the metric making `ω₁, ω₂, ψ` orthonormal.
    pub fn volume(&self) -> PiMultiple {
        match self.kind {
            ChartKind::S3Hyperspherical => PiMultiple::new(rat(2, 1), 2),
            ChartKind::So3EulerZyz => PiMultiple::new(rat(8, 1), 2),
        }
    }

    pub fn embed(&self, t: [f64; 3]) -> Vec<f64> {
        self.embed_with_tangents(t).0
    }

    /// The embedded point and its three coordinate tangent vectors.
    pub fn embed_with_tangents(&self, t: [f64; 3]) -> (Vec<f64>, [Vec<f64>; 3]) {
        match self.kind {
            ChartKind::S3Hyperspherical => {
                let (sc, cc) = t[0].sin_cos();
                let (st, ct) = t[1].sin_cos();
                let (sp, cp) = t[2].sin_cos();
                let x = vec![cc, sc * ct, sc * st * cp, sc * st * sp];
                let d_chi = vec![-sc, cc * ct, cc * st * cp, cc * st * sp];
                let d_theta = vec![0.0, -sc * st, sc * ct * cp, sc * ct * sp];
                let d_phi = vec![0.0, 0.0, -sc * st * sp, sc * st * cp];
                (x, [d_chi, d_theta, d_phi])
            }
            ChartKind::So3EulerZyz => {
                let (a, da) = (rot_z(t[0]), rot_z_prime(t[0]));
                let (b, db) = (rot_y(t[1]), rot_y_prime(t[1]));
                let (c, dc) = (rot_z(t[2]), rot_z_prime(t[2]));
                let flat = |m: [[f64; 3]; 3]| m.iter().flatten().copied().collect::<Vec<_>>();
                (
                    flat(mul3(&mul3(&a, &b), &c)),
                    [
                        flat(mul3(&mul3(&da, &b), &c)),
                        flat(mul3(&mul3(&a, &db), &c)),
                        flat(mul3(&mul3(&a, &b), &dc)),
                    ],
                )
            }
        }
    }

    /// Distance of an ambient point from the target manifold: `||x| − 1|`
    /// for `S³`; `max(|RᵀR − I|, |det R − 1|)` for `SO(3)`.
    pub fn manifold_residual(&self, x: &[f64]) -> f64 {
        match self.kind {
            ChartKind::S3Hyperspherical => (x.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs(),
            ChartKind::So3EulerZyz => {
                let r = |i: usize, j: usize| x[3 * i + j];
                let mut worst: f64 = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        let g: f64 = (0..3).map(|k| r(k, i) * r(k, j)).sum();
                        worst = worst.max((g - if i == j { 1.0 } else { 0.0 }).abs());
                    }
                }
                let det = r(0, 0) * (r(1, 1) * r(2, 2) - r(1, 2) * r(2, 1))
                    - r(0, 1) * (r(1, 0) * r(2, 2) - r(1, 2) * r(2, 0))
                    + r(0, 2) * (r(1, 0) * r(2, 1) - r(1, 1) * r(2, 0));
                worst.max((det - 1.0).abs())
            }
        }
    }
}

fn rot_z(a: f64) -> [[f64; 3]; 3] {
    let (s, c) = a.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

fn rot_z_prime(a: f64) -> [[f64; 3]; 3] {
    let (s, c) = a.sin_cos();
    [[-s, -c, 0.0], [c, -s, 0.0], [0.0, 0.0, 0.0]]
}

fn rot_y(b: f64) -> [[f64; 3]; 3] {
    let (s, c) = b.sin_cos();
    [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]
}

fn rot_y_prime(b: f64) -> [[f64; 3]; 3] {
    let (s, c) = b.sin_cos();
    [[-s, 0.0, c], [0.0, 0.0, 0.0], [-c, 0.0, -s]]
}

fn mul3(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes increasing.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Newton iteration from the Chebyshev-like initial guess.
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Tensor-product Gauss–Legendre grid on a chart's parameter box.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes_per_axis: usize,
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(chart: &Chart, nodes_per_axis: usize) -> Result<Self> {
        if nodes_per_axis == 0 {
            return Err(Error::InvalidConfig("quadrature needs at least one node per axis".into()));
        }
        let (x, w) = gauss_legendre(nodes_per_axis);
        let axes: Vec<Vec<(f64, f64)>> = chart
            .parameter_box()
            .iter()
            .map(|&(a, b)| {
                let half = 0.5 * (b - a);
                x.iter().zip(&w).map(|(xi, wi)| (a + half * (xi + 1.0), half * wi)).collect()
            })
            .collect();
        let mut points = Vec::with_capacity(nodes_per_axis.pow(3));
        let mut weights = Vec::with_capacity(nodes_per_axis.pow(3));
        for &(t0, w0) in &axes[0] {
            for &(t1, w1) in &axes[1] {
                for &(t2, w2) in &axes[2] {
                    points.push([t0, t1, t2]);
                    weights.push(w0 * w1 * w2);
                }
            }
        }
        Ok(Self {
            nodes_per_axis,
            points,
            weights,
        })
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.nodes_per_axis
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Sum in a fixed balanced-tree order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `orientation_sign · Σ wᵢ f(embed(pᵢ))(∂₁, ∂₂, ∂₃)`.
pub fn integrate_threeform(f: &dyn ThreeFormIntegrand, chart: &Chart, rule: &QuadratureRule) -> Result<f64> {
    if f.ambient_dim() != chart.ambient_dim() {
        return Err(Error::InvalidConfig(format!(
            "integrand lives in ℝ^{} but chart {} embeds into ℝ^{}",
            f.ambient_dim(),
            chart.name(),
            chart.ambient_dim()
        )));
    }
    let samples: Vec<f64> = rule
        .points
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(&t, &w)| {
            let (x, [u, v, z]) = chart.embed_with_tangents(t);
            let value = f.evaluate(&x, &u, &v, &z)?;
            if !value.is_finite() {
                return Err(Error::Evaluation(format!("non-finite integrand at parameters {t:?}")));
            }
            Ok(w * value)
        })
        .collect::<Result<_>>()?;
    Ok(f64::from(chart.orientation_sign) * pairwise_sum(&samples))
}

/// Result of integrating on a ladder of grids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refinement {
    /// Value on the finest grid.
    pub value: f64,
    /// `|last − second to last|`.
    pub error_estimate: f64,
    /// `(nodes per axis, value)` for every level.
    pub levels: Vec<(usize, f64)>,
}

/// Integrates on each level and estimates the error from the last two.
///
/// Fails with [`Error::NonConvergent`] if the last difference exceeds the
/// one before it while both are above the noise floor.
pub fn grid_refinement_estimate(f: &dyn ThreeFormIntegrand, chart: &Chart, levels: &[usize]) -> Result<Refinement> {
    if levels.len() < 2 {
        return Err(Error::InvalidConfig("grid refinement needs at least two levels".into()));
    }
    let values = levels
        .iter()
        .map(|&n| Ok((n, integrate_threeform(f, chart, &QuadratureRule::new(chart, n)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
    let value = values[values.len() - 1].1;
    let floor = NOISE_FLOOR * value.abs().max(1.0);
    if let [.., previous, last] = diffs[..] {
        if last > previous && last > floor {
            return Err(Error::NonConvergent { last, previous });
        }
    }
    Ok(Refinement {
        value,
        error_estimate: diffs[diffs.len() - 1],
        levels: values,
    })
}
