use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::base::BaseManifold;
use super::gauge::FMat;
use crate::connections::{ConnectionMatrix, MetricSpec};
use crate::error::{Error, Result};
use crate::lie::{registry, BilinearForm, LieAlgebra, OrthogonalDecomposition};
use crate::linalg::RMat;
use crate::connections::levi_civita_coframe;
use crate::poly::standard::quaternion_section;
use crate::poly::{CompiledPolynomial, GroupKind, PolyMatrixMap};
use crate::quadrature::Chart;
use crate::scalar::{int, rational_to_f64};

pub const FLAT_SAMPLES: usize = 200;
pub const FLAT_TOL: f64 = 1e-10;

/// Inputs for checking that `θ = F*(μ^⊤)` for a bundle map `F` into a
/// matrix group.
///
/// The frame bundle is trivialized by a section `s` over `base` and the
/// structure group `SO(m)` acts through the lower-right block, so points of
/// the bundle are `s(x)·diag(1, …, 1, k)` and `F∘s` is `section`.
#[derive(Debug, Clone)]
pub struct FlatExtensionCheck<'a> {
    pub section: &'a PolyMatrixMap,
    pub decomposition: &'a OrthogonalDecomposition,
    /// `s*θ` in the base coframe.
    pub expected: &'a ConnectionMatrix,
    pub base: BaseManifold,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatExtensionReport {
    pub decomposition: String,
    pub samples: usize,
    /// `max |(F*μ)^⊤ − θ|` over entries.
    pub max_connection_deviation: f64,
    /// `max |[F*μ^⊥, F*μ^⊥]^⊥|` over pairs of sampled vectors.
    pub max_bracket_residual: f64,
    /// Largest entry of the upper-left block of `F*μ^⊥`.
    pub max_scalar_component: f64,
    /// Largest `|Z + Xᵀ|` between the off-diagonal blocks of `F*μ^⊥`.
    pub max_transpose_residual: f64,
    /// `max |CS(F*μ) − CS((F*μ)^⊤)|` on sampled vector triples.
    pub max_blindness_residual: f64,
    pub tolerance: f64,
    pub bracket_condition_holds: bool,
    pub blindness_holds: bool,
    pub pass: bool,
}

/// The round metric on `S³` in the orthonormal coframe `(−κ, ξ, ρ)`, the
/// normal-column entries of `σ*μ` for the quaternion section `σ`.
pub fn round_s3_frame_metric() -> MetricSpec {
    let frame = RMat::from_rows(vec![
        vec![int(0), int(0), int(-1)],
        vec![int(1), int(0), int(0)],
        vec![int(0), int(1), int(0)],
    ]);
    MetricSpec::with_orthonormal_coframe(BaseManifold::Su2.complex(), frame, vec![1, 1, 1])
        .expect("permutation frame is invertible")
}

struct CompiledMap {
    n: usize,
    values: Vec<CompiledPolynomial>,
    partials: Vec<Vec<CompiledPolynomial>>,
}

impl CompiledMap {
    fn new(map: &PolyMatrixMap) -> Self {
        Self {
            n: map.size(),
            values: map.entries().iter().map(|p| p.compile()).collect(),
            partials: map
                .entries()
                .iter()
                .map(|p| (0..map.nvars()).map(|i| p.partial(i).compile()).collect())
                .collect(),
        }
    }

    fn at(&self, x: &[f64]) -> FMat {
        FMat::from_fn(self.n, self.n, |i, j| self.values[i * self.n + j].eval(x))
    }

    fn derivative(&self, x: &[f64], t: &[f64]) -> FMat {
        FMat::from_fn(self.n, self.n, |i, j| {
            self.partials[i * self.n + j].iter().zip(t).map(|(p, ti)| p.eval(x) * ti).sum()
        })
    }
}

fn embed_lower_right(m: &FMat, n: usize, identity_fill: bool) -> FMat {
    let offset = n - m.rows();
    FMat::from_fn(n, n, |i, j| {
        if i >= offset && j >= offset {
            m[(i - offset, j - offset)]
        } else if identity_fill && i == j {
            1.0
        } else {
            0.0
        }
    })
}

fn max_abs_diff(a: &FMat, b: &FMat) -> f64 {
    (a - b).max_abs()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `⟨θ∧dθ⟩ + ⅓⟨θ∧[θ,θ]⟩` on `(V₀, V₁, V₂)` given `θ(V_i)` and `dθ = −θ∧θ`
/// reduced by `project`.
fn chern_simons_on_triple(
    g: &LieAlgebra,
    d: &OrthogonalDecomposition,
    theta: &[Vec<f64>; 3],
    project: impl Fn(&[f64]) -> Vec<f64>,
    flat: &[Vec<f64>; 3],
) -> f64 {
    let form = d.form();
    // dθ(V_i, V_j) = −[θ_i, θ_j] of the flat form, then projected.
    let dtheta = |i: usize, j: usize| -> Vec<f64> {
        project(&g.bracket(&flat[i], &flat[j])).into_iter().map(|x| -x).collect()
    };
    let bracket2 = |i: usize, j: usize| -> Vec<f64> { g.bracket(&theta[i], &theta[j]).into_iter().map(|x| 2.0 * x).collect() };
    let wedge = |f: &dyn Fn(usize, usize) -> Vec<f64>| {
        form.pair(&theta[0], &f(1, 2)) - form.pair(&theta[1], &f(0, 2)) + form.pair(&theta[2], &f(0, 1))
    };
    wedge(&dtheta) + wedge(&bracket2) / 3.0
}

pub fn flat_extension_verify(check: &FlatExtensionCheck) -> Result<FlatExtensionReport> {
    let d = check.decomposition;
    let g = d.ambient();
    let n = check.section.size();
    let m = check.expected.size();
    if g.matrix_size() != n || m != 3 || n < m {
        return Err(Error::InvalidConfig(format!(
            "flat extension check needs an SO(3) structure group inside {n}×{n} matrices of {}",
            g.name()
        )));
    }
    let chart = check.base.chart();
    if chart.ambient_dim() != check.section.nvars() {
        return Err(Error::ShapeMismatch {
            rows: chart.ambient_dim(),
            cols: check.section.nvars(),
        });
    }
    let fiber = Chart::so3();
    let sigma = CompiledMap::new(check.section);
    let coframe: Vec<_> = check.base.ambient_coframe().iter().map(|f| f.compile()).collect();
    let coeff = |a: usize, b: usize, k: usize| rational_to_f64(check.expected.coefficient(a, b, k));
    let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
    let sample_box = |c: &Chart, rng: &mut ChaCha8Rng| c.parameter_box().map(|(lo, hi)| rng.gen_range(lo..hi));

    let mut report = FlatExtensionReport {
        decomposition: format!("{}/{}", g.name(), d.sub().name()),
        samples: check.samples,
        max_connection_deviation: 0.0,
        max_bracket_residual: 0.0,
        max_scalar_component: 0.0,
        max_transpose_residual: 0.0,
        max_blindness_residual: 0.0,
        tolerance: check.tolerance,
        bracket_condition_holds: false,
        blindness_holds: false,
        pass: false,
    };
    let offset = n - m;
    for _ in 0..check.samples {
        let (x, tangents) = chart.embed_with_tangents(sample_box(&chart, &mut rng));
        let k = FMat::from_rows(fiber.embed(sample_box(&fiber, &mut rng)).chunks(3).map(<[f64]>::to_vec).collect());
        let k_hat = embed_lower_right(&k, n, true);
        let s = sigma.at(&x);
        let p = &s * &k_hat;
        let group_residual = match check.section.group() {
            GroupKind::Orthogonal => max_abs_diff(&(&p.transpose() * &p), &FMat::identity(n)),
            GroupKind::Unimodular => (p.determinant() - 1.0).abs(),
        };
        if group_residual > 1e-9 {
            return Err(Error::NotInGroup(format!("F(p) misses the group by {group_residual:e}")));
        }
        let p_inv = p.inverse(1e-12)?;

        let mut theta = Vec::with_capacity(3);
        let mut tops = Vec::with_capacity(3);
        let mut perps = Vec::with_capacity(3);
        for _ in 0..3 {
            let c: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let tangent: Vec<f64> = (0..x.len()).map(|i| (0..3).map(|a| c[a] * tangents[a][i]).sum()).collect();
            let kk = {
                let w: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                FMat::from_rows(vec![vec![0.0, -w[2], w[1]], vec![w[2], 0.0, -w[0]], vec![-w[1], w[0], 0.0]])
            };
            // V = ds(X)·k̂ + s·k̂·K̂ and F*μ(V) = p⁻¹V.
            let v = &(&sigma.derivative(&x, &tangent) * &k_hat) + &(&p * &embed_lower_right(&kk, n, false));
            let mu = &p_inv * &v;
            let coords = g
                .coordinates(&mu, 1e-9)
                .map_err(|_| Error::NotInGroup(format!("F*μ leaves {}", g.name())))?;
            let top = d.project_top(&coords);
            let perp = d.project_perp(&coords);

            let omega: Vec<f64> = coframe.iter().map(|f| f.evaluate(&x, &[&tangent])).collect();
            let base_theta = FMat::from_fn(m, m, |a, b| (0..m).map(|l| coeff(a, b, l) * omega[l]).sum());
            let expected = &(&k.transpose() * &(&base_theta * &k)) + &kk;
            let deviation = max_abs_diff(&g.matrix_of(&top), &embed_lower_right(&expected, n, false));
            report.max_connection_deviation = report.max_connection_deviation.max(deviation);

            let pm = g.matrix_of(&perp);
            for i in 0..offset {
                for j in 0..offset {
                    report.max_scalar_component = report.max_scalar_component.max(pm[(i, j)].abs());
                }
                for j in offset..n {
                    report.max_transpose_residual = report.max_transpose_residual.max((pm[(i, j)] + pm[(j, i)]).abs());
                }
            }
            theta.push(coords);
            tops.push(top);
            perps.push(perp);
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (_, outside) = d.perp_bracket_component(&perps[i], &perps[j]);
            report.max_bracket_residual = report.max_bracket_residual.max(max_abs(&outside));
        }
        let theta: [Vec<f64>; 3] = theta.try_into().expect("three vectors");
        let tops: [Vec<f64>; 3] = tops.try_into().expect("three vectors");
        let full = chern_simons_on_triple(g, d, &theta, |v| v.to_vec(), &theta);
        let top = chern_simons_on_triple(g, d, &tops, |v| d.project_top(v), &theta);
        report.max_blindness_residual = report.max_blindness_residual.max((full - top).abs());
    }
    let tol = check.tolerance;
    report.bracket_condition_holds = report.max_bracket_residual <= tol;
    report.blindness_holds = report.max_blindness_residual <= tol;
    report.pass = report.max_connection_deviation <= tol
        && report.bracket_condition_holds
        && report.blindness_holds
        && report.max_scalar_component <= tol
        && report.max_transpose_residual <= tol;
    Ok(report)
}

fn lower_right_decomposition(ambient: &str, sub: &str) -> Result<OrthogonalDecomposition> {
    let big = registry::algebra(ambient)?;
    let small = registry::algebra(sub)?;
    let e = OrthogonalDecomposition::lower_right_embedding(&big, &small)?;
    OrthogonalDecomposition::new(&BilinearForm::normalized_trace(&big), &small, e)
}

/// `so(4) = so(3) ⊕ ℝ³` with `so(3)` in the lower-right block.
pub fn so4_so3_decomposition() -> Result<OrthogonalDecomposition> {
    lower_right_decomposition("so4", "so3")
}

/// `sl(4) = sl(3) ⊕ (ℝ ⊕ ℝ³ ⊕ ℝ³*)` with `sl(3)` in the lower-right block.
pub fn sl4_sl3_decomposition() -> Result<OrthogonalDecomposition> {
    lower_right_decomposition("sl4", "sl3")
}

/// The identity of `SO(4)` as a flat extension over the round `S³`, with
/// the frame bundle trivialized by the quaternion section.
pub fn round_s3_flat_extension(d: &OrthogonalDecomposition, seed: u64) -> Result<FlatExtensionReport> {
    let section = quaternion_section();
    let expected = levi_civita_coframe(&round_s3_frame_metric())?;
    flat_extension_verify(&FlatExtensionCheck {
        section: &section,
        decomposition: d,
        expected: &expected,
        base: BaseManifold::Su2,
        samples: FLAT_SAMPLES,
        seed,
        tolerance: FLAT_TOL,
    })
}
