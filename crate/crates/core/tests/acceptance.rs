//! One line per acceptance criterion; exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use cs3_core::coframe::{CoframeComplex, ValueSpace, ValuedForm};
use cs3_core::connections::{berger_lorentz_metric, levi_civita_coframe, ConnectionMatrix};
use cs3_core::invariants::*;
use cs3_core::lie::{registry, BilinearForm};
use cs3_core::poly::standard::{so3_inclusion, su2_coframe};
use cs3_core::quadrature::{grid_refinement_estimate, Chart, DEFAULT_LEVELS};
use cs3_core::scalar::{format_rational, int, rat, rational_to_f64, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

type Criterion = fn() -> Result<Outcome, cs3_core::Error>;

fn normalization() -> Result<Outcome, cs3_core::Error> {
    let start = Instant::now();
    let n = normalization_so4(&DEFAULT_LEVELS)?;
    let elapsed = start.elapsed().as_secs_f64();
    let exact = n.subgroup.exact == Some(int(1));
    let section = (n.section.value - 1.0).abs() <= 1e-6 && n.section.error_estimate <= 1e-6;
    Ok(outcome(
        exact && section && elapsed < 30.0,
        format!(
            "∫ι*ζ = {}, ∫σ*ζ = {:.12} (error {:.1e}, 32 nodes/axis), {elapsed:.2}s",
            n.subgroup.exact.as_ref().map(format_rational).unwrap_or_default(),
            n.section.value,
            n.section.error_estimate
        ),
    ))
}

fn volumes() -> Result<Outcome, cs3_core::Error> {
    let [xi, rho, kappa] = su2_coframe();
    let sphere = xi.wedge(&rho)?.wedge(&kappa)?;
    let mc = so3_inclusion().mc_pullback();
    let group = mc.get(1, 0).wedge(mc.get(2, 0))?.wedge(mc.get(2, 1))?;
    let s3 = grid_refinement_estimate(&sphere.compile(), &Chart::s3(), &DEFAULT_LEVELS)?.value;
    let so3 = grid_refinement_estimate(&group.compile(), &Chart::so3(), &DEFAULT_LEVELS)?.value;
    let (e1, e2) = (2.0 * PI * PI, 8.0 * PI * PI);
    let (r1, r2) = (((s3 - e1) / e1).abs(), ((so3 - e2) / e2).abs());
    Ok(outcome(
        r1 <= 1e-8 && r2 <= 1e-6,
        format!("∫ξρκ = {s3:.12} (rel {r1:.1e}), ∫ω₁ω₂ψ = {so3:.12} (rel {r2:.1e})"),
    ))
}

/// The printed Berger connection `[[0, −(λ²+2)κ, −λρ], [(λ²+2)κ, 0, λξ], [−λρ, λξ, 0]]`.
fn printed_berger(l: &Rational) -> ConnectionMatrix {
    let k = l * l + int(2);
    let z = Rational::zero;
    let v = |a: Rational, b: Rational, c: Rational| vec![a, b, c];
    ConnectionMatrix::new(
        vec![1, 1, -1],
        vec![
            vec![v(z(), z(), z()), v(z(), z(), -k.clone()), v(z(), -l.clone(), z())],
            vec![v(z(), z(), k), v(z(), z(), z()), v(l.clone(), z(), z())],
            vec![v(z(), -l.clone(), z()), v(l.clone(), z(), z()), v(z(), z(), z())],
        ],
    )
    .expect("well-formed matrix")
}

fn berger() -> Result<Outcome, cs3_core::Error> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (lambda, expected) in [(rat(1, 2), rat(41, 16)), (int(1), int(5)), (int(2), int(26))] {
        let value = cs_invariant_algebraic(&berger_lorentz_example(&lambda)?)?.exact;
        let solver = levi_civita_coframe(&berger_lorentz_metric(&lambda)?)?;
        let matches = solver == printed_berger(&lambda);
        pass &= value.as_ref() == Some(&expected) && matches;
        parts.push(format!(
            "λ={} → {} (matrix {})",
            format_rational(&lambda),
            value.as_ref().map(format_rational).unwrap_or_default(),
            if matches { "matches" } else { "differs" }
        ));
    }
    Ok(outcome(pass, parts.join(", ")))
}

fn rp3() -> Result<Outcome, cs3_core::Error> {
    let r = cs_invariant_algebraic(&rp3_equiaffine_example())?;
    let eq = r.verdict(VerdictContext::Equiaffine).map(|v| v.obstructed);
    let riem = r.verdict(VerdictContext::Riemannian).map(|v| v.obstructed);
    Ok(outcome(
        r.exact == Some(rat(1, 2)) && eq == Some(true) && riem == Some(true),
        format!(
            "c = {}, equiaffine obstructed {eq:?}, riemannian obstructed {riem:?}",
            r.exact.as_ref().map(format_rational).unwrap_or_default()
        ),
    ))
}

type M4 = [[f64; 4]; 4];

fn mul(a: &M4, b: &M4) -> M4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn tr(a: &M4) -> f64 {
    (0..4).map(|i| a[i][i]).sum()
}

fn lin(terms: &[(f64, &M4)]) -> M4 {
    let mut c = [[0.0; 4]; 4];
    for (s, m) in terms {
        for i in 0..4 {
            for j in 0..4 {
                c[i][j] += s * m[i][j];
            }
        }
    }
    c
}

/// The first-row-and-column part, orthogonal to the lower-right `so(3)`.
fn perp(m: &M4) -> M4 {
    let mut c = [[0.0; 4]; 4];
    for k in 1..4 {
        c[0][k] = m[0][k];
        c[k][0] = m[k][0];
    }
    c
}

/// `(CS(θ), CS(θ^⊤) + ⟨θ^⊥, Θ^⊥⟩)` on `(E₀, E₁, E₂)` for a constant
/// `θ(E_k) = M_k`, trace pairing, `dθ(E_i,E_j) = −Σ f^k_{ij} M_k`.
fn blindness_oracle(m: &[M4; 3], f: &dyn Fn(usize, usize, usize) -> f64) -> (f64, f64) {
    let cs = |m: &[M4; 3]| {
        let d = |i, j| lin(&[(-f(i, j, 0), &m[0]), (-f(i, j, 1), &m[1]), (-f(i, j, 2), &m[2])]);
        let quad = tr(&mul(&m[0], &d(1, 2))) - tr(&mul(&m[1], &d(0, 2))) + tr(&mul(&m[2], &d(0, 1)));
        let cubic = tr(&mul(&mul(&m[0], &m[1]), &m[2])) - tr(&mul(&mul(&m[0], &m[2]), &m[1]));
        quad + 2.0 * cubic
    };
    let top = (*m).map(|x| lin(&[(1.0, &x), (-1.0, &perp(&x))]));
    let curvature = |i: usize, j: usize| {
        let bracket = lin(&[(1.0, &mul(&m[i], &m[j])), (-1.0, &mul(&m[j], &m[i]))]);
        let d = lin(&[(-f(i, j, 0), &m[0]), (-f(i, j, 1), &m[1]), (-f(i, j, 2), &m[2])]);
        perp(&lin(&[(1.0, &d), (1.0, &bracket)]))
    };
    let p = (*m).map(|x| perp(&x));
    let pairing = tr(&mul(&p[0], &curvature(1, 2))) - tr(&mul(&p[1], &curvature(0, 2))) + tr(&mul(&p[2], &curvature(0, 1)));
    (cs(m), cs(&top) + pairing)
}

fn top_value(form: &ValuedForm<f64>) -> f64 {
    form.terms().map(|(_, v)| v[0]).sum()
}

fn blindness() -> Result<Outcome, cs3_core::Error> {
    let g = registry::algebra("so4")?;
    let d = so4_so3_decomposition()?;
    let trace = BilinearForm::trace(&g);
    let c = CoframeComplex::su2();
    let f = |i, j, k| rational_to_f64(c.structure_constant(i, j, k));
    let basis: Vec<M4> = g
        .basis()
        .iter()
        .map(|b| std::array::from_fn(|i| std::array::from_fn(|j| rational_to_f64(&b[(i, j)]))))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (mut library, mut oracle, mut agreement) = (0.0f64, 0.0f64, 0.0f64);
    let mut exact_zero = true;
    for _ in 0..50 {
        let coords: Vec<Vec<f64>> = (0..3).map(|_| (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let theta = ValuedForm::from_terms(
            3,
            1,
            ValueSpace::Algebra(g.clone()),
            coords.iter().enumerate().map(|(k, v)| (vec![k], v.clone())),
        )?;
        library = library.max(theta.blindness_residual(&d, &trace, &c, 1e-12)?.max_abs());
        let m: [M4; 3] = std::array::from_fn(|k| {
            let terms: Vec<(f64, &M4)> = coords[k].iter().copied().zip(&basis).collect();
            lin(&terms)
        });
        let (full, split) = blindness_oracle(&m, &f);
        oracle = oracle.max((full - split).abs());
        agreement = agreement.max((top_value(&theta.chern_simons(&trace, &c)?) - full).abs());

        let ints: Vec<Vec<Rational>> = (0..3).map(|_| (0..6).map(|_| int(rng.gen_range(-3..=3))).collect()).collect();
        let exact = ValuedForm::from_terms(
            3,
            1,
            ValueSpace::Algebra(g.clone()),
            ints.into_iter().enumerate().map(|(k, v)| (vec![k], v)),
        )?;
        exact_zero &= exact.blindness_residual(&d, &trace, &c, 0.0)?.is_zero();
    }
    Ok(outcome(
        library <= 1e-12 && oracle <= 1e-12 && agreement <= 1e-12 && exact_zero,
        format!(
            "50 forms: residual {library:.1e}, matrix oracle {oracle:.1e}, CS agreement {agreement:.1e}, rational residual {}",
            if exact_zero { "exactly 0" } else { "nonzero" }
        ),
    ))
}

fn identities() -> Result<Outcome, cs3_core::Error> {
    let s = run_suite(SuiteName::Identities, &SuiteConfig::default());
    let worst = s.checks.iter().filter_map(|c| c.residual).fold(0.0, f64::max);
    Ok(outcome(
        s.pass() && worst <= 1e-12,
        format!("{} checks, 100 trials each, {} failed, worst residual {worst:.1e}", s.checks.len(), s.failed),
    ))
}

fn section_change() -> Result<Outcome, cs3_core::Error> {
    let double = run_section_change(SectionCase::DoubleCover, &DEFAULT_LEVELS)?;
    let identity = run_section_change(SectionCase::Identity, &DEFAULT_LEVELS)?;
    let class = mod_distance(identity.before.value, identity.after.value);
    Ok(outcome(
        (double.delta - 2.0).abs() <= 1e-4 && (identity.delta - 1.0).abs() <= 1e-4 && class <= 1e-4,
        format!(
            "double cover Δ = {:.9}, identity Δ = {:.9}, ℝP³ class {:.9} → {:.9}",
            double.delta,
            identity.delta,
            mod_one(identity.before.value, 1e-9),
            mod_one(identity.after.value, 1e-9)
        ),
    ))
}

fn flat_extension() -> Result<Outcome, cs3_core::Error> {
    let so = round_s3_flat_extension(&so4_so3_decomposition()?, 0)?;
    let sl = round_s3_flat_extension(&sl4_sl3_decomposition()?, 0)?;
    Ok(outcome(
        so.pass && sl.pass && so.samples == 200 && sl.max_scalar_component <= 1e-10,
        format!(
            "200 points: deviation {:.1e}, so(4) bracket {:.1e}, sl(4) bracket {:.1e}, ℝ-component {:.1e}",
            so.max_connection_deviation.max(sl.max_connection_deviation),
            so.max_bracket_residual,
            sl.max_bracket_residual,
            sl.max_scalar_component
        ),
    ))
}

/// `(a, X, Z)` as `[[a, Z], [X, −a/3·I]]` in `sl(4)` coordinates.
fn sl4_perp_vector(a: i64, x: [i64; 3], z: [i64; 3]) -> Result<Vec<Rational>, cs3_core::Error> {
    let g = registry::algebra("sl4")?;
    let m = cs3_core::linalg::RMat::from_fn(4, 4, |i, j| match (i, j) {
        (0, 0) => int(a),
        (0, j) => int(z[j - 1]),
        (i, 0) => int(x[i - 1]),
        (i, j) if i == j => rat(-a, 3),
        _ => int(0),
    });
    g.coordinates(&m, 0.0)
}

fn perp_bracket_formula() -> Result<Outcome, cs3_core::Error> {
    let g = registry::algebra("sl4")?;
    let d = sl4_sl3_decomposition()?;
    let unit = |k: usize| std::array::from_fn::<i64, 3, _>(|i| i64::from(i == k));
    let mut grid: Vec<(i64, [i64; 3], [i64; 3])> = vec![(1, [0; 3], [0; 3])];
    grid.extend((0..3).map(|k| (0, unit(k), [0; 3])));
    grid.extend((0..3).map(|k| (0, [0; 3], unit(k))));
    grid.push((2, [1, -1, 3], [0, 2, -1]));
    let mut mismatches = 0;
    for &(a1, x1, z1) in &grid {
        for &(a2, x2, z2) in &grid {
            let (_, perp) = d.perp_bracket_component(&sl4_perp_vector(a1, x1, z1)?, &sl4_perp_vector(a2, x2, z2)?);
            let m = g.matrix_of(&perp);
            let dot = |p: [i64; 3], q: [i64; 3]| (0..3).map(|i| p[i] * q[i]).sum::<i64>();
            let ok = m[(0, 0)] == int(dot(z1, x2) - dot(z2, x1))
                && (0..3).all(|k| {
                    m[(k + 1, 0)] == rat(4, 3) * int(-a1 * x2[k] + a2 * x1[k])
                        && m[(0, k + 1)] == rat(4, 3) * int(a1 * z2[k] - a2 * z1[k])
                });
            mismatches += usize::from(!ok);
        }
    }
    Ok(outcome(
        mismatches == 0,
        format!("{} basis pairs, {mismatches} mismatches (exact rationals)", grid.len() * grid.len()),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("normalization", normalization),
        ("volume constants", volumes),
        ("Berger-Lorentz family", berger),
        ("ℝP³ equiaffine", rp3),
        ("blindness", blindness),
        ("algebraic identities", identities),
        ("section-change integrality", section_change),
        ("flat extension of round S³", flat_extension),
        ("sl(4) perp bracket", perp_bracket_formula),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        failed += usize::from(!o.pass);
        println!("{} criterion {} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
