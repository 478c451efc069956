use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::base::BaseManifold;
use super::builtin::{
    berger_lorentz_closed_form_connection, berger_lorentz_example, mod_distance, rp3_equiaffine_example,
    run_example, run_section_change, s3_round_example, BuiltinExample, RunOptions, SectionCase, SECTION_TOL,
};
use super::flat::{round_s3_flat_extension, sl4_sl3_decomposition, so4_so3_decomposition};
use super::normalization::normalization_so4;
use super::verdict::VerdictContext;
use crate::coframe::{CoframeComplex, ValueSpace, ValuedForm};
use crate::connections::{berger_lorentz_metric, levi_civita_coframe};
use crate::error::{Error, Result};
use crate::lie::{registry, BilinearForm, LieAlgebra};
use crate::poly::PolyForm;
use crate::quadrature::{grid_refinement_estimate, Chart, DEFAULT_LEVELS};
use crate::scalar::{int, rat, Rational, Scalar};

/// Residual bound for the floating-point identity checks.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Identities,
    Normalization,
    Examples,
    All,
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Self::Identities),
            "normalization" => Ok(Self::Normalization),
            "examples" => Ok(Self::Examples),
            "all" => Ok(Self::All),
            other => Err(Error::UnknownExample(format!("suite {other}"))),
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Identities => "identities",
            Self::Normalization => "normalization",
            Self::Examples => "examples",
            Self::All => "all",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub levels: Vec<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            levels: DEFAULT_LEVELS.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Largest residual or error, when the check measures one.
    pub residual: Option<f64>,
    pub detail: String,
}

impl CheckResult {
    fn bounded(name: impl Into<String>, residual: Result<f64>, tol: f64) -> Self {
        match residual {
            Ok(r) => Self {
                name: name.into(),
                pass: r <= tol,
                residual: Some(r),
                detail: format!("max residual {r:.3e} (tolerance {tol:e})"),
            },
            Err(e) => Self::failed(name, &e),
        }
    }

    fn boolean(name: impl Into<String>, outcome: Result<(bool, String)>) -> Self {
        match outcome {
            Ok((pass, detail)) => Self {
                name: name.into(),
                pass,
                residual: None,
                detail,
            },
            Err(e) => Self::failed(name, &e),
        }
    }

    fn failed(name: impl Into<String>, e: &Error) -> Self {
        Self {
            name: name.into(),
            pass: false,
            residual: None,
            detail: format!("error: {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteSummary {
    fn new(suite: SuiteName, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        Self {
            suite: suite.to_string(),
            failed: checks.len() - passed,
            passed,
            checks,
        }
    }

    pub fn pass(&self) -> bool {
        self.failed == 0
    }
}

pub fn run_suite(suite: SuiteName, cfg: &SuiteConfig) -> SuiteSummary {
    let checks = match suite {
        SuiteName::Identities => identity_checks(cfg),
        SuiteName::Normalization => normalization_checks(cfg),
        SuiteName::Examples => example_checks(cfg),
        SuiteName::All => {
            let mut all = identity_checks(cfg);
            all.extend(normalization_checks(cfg));
            all.extend(example_checks(cfg));
            all
        }
    };
    SuiteSummary::new(suite, checks)
}

fn multi_indices(rank: usize, degree: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, rank: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..rank {
            cur.push(i);
            go(i + 1, rank, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, rank, degree, &mut Vec::new(), &mut out);
    out
}

/// A form with about half of its blades populated by `sample`.
fn random_form<S: Scalar>(
    rng: &mut ChaCha8Rng,
    rank: usize,
    degree: usize,
    g: &Arc<LieAlgebra>,
    sample: impl Fn(&mut ChaCha8Rng) -> S,
) -> Result<ValuedForm<S>> {
    let mut terms = Vec::new();
    for idx in multi_indices(rank, degree) {
        if rng.gen_bool(0.5) {
            terms.push((idx, (0..g.dim()).map(|_| sample(rng)).collect()));
        }
    }
    ValuedForm::from_terms(rank, degree, ValueSpace::Algebra(Arc::clone(g)), terms)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-1.0..1.0)
}

fn small_int(rng: &mut ChaCha8Rng) -> Rational {
    int(rng.gen_range(-3..=3))
}

fn sign(p: usize) -> f64 {
    if p.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn residual(a: &ValuedForm<f64>, b: &ValuedForm<f64>) -> Result<f64> {
    Ok(a.sub(b)?.max_abs())
}

/// Runs `trial` `trials` times with fresh forms and keeps the worst residual.
fn over_trials(cfg: &SuiteConfig, salt: u64, mut trial: impl FnMut(&mut ChaCha8Rng) -> Result<f64>) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials {
        worst = worst.max(trial(&mut rng)?);
    }
    Ok(worst)
}

fn identity_checks(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let setup = || -> Result<(Arc<LieAlgebra>, CoframeComplex, BilinearForm)> {
        let g = registry::algebra("so4")?;
        let c = CoframeComplex::of_algebra(&g, (1..=6).map(|i| format!("w{i}")).collect())?;
        let form = BilinearForm::trace(&g);
        Ok((g, c, form))
    };
    let (g, c, form) = match setup() {
        Ok(s) => s,
        Err(e) => return vec![CheckResult::failed("identities setup", &e)],
    };
    let form_of = |rng: &mut ChaCha8Rng, max_degree: usize| {
        let p = rng.gen_range(0..=max_degree);
        random_form(rng, 6, p, &g, uniform)
    };
    let mut checks = Vec::new();

    let r = over_trials(cfg, 1, |rng| {
        let (w, t) = (form_of(rng, 3)?, form_of(rng, 3)?);
        let s = sign(w.degree() * t.degree());
        let pairing = residual(&w.pairing(&t, &form)?, &t.pairing(&w, &form)?.scale(&s))?;
        let bracket = residual(&w.bracket(&t)?, &t.bracket(&w)?.scale(&-s))?;
        Ok(pairing.max(bracket))
    });
    checks.push(CheckResult::bounded("graded symmetry of pairing and bracket", r, IDENTITY_TOL));

    let r = over_trials(cfg, 2, |rng| {
        let (w, t) = (form_of(rng, 2)?, form_of(rng, 2)?);
        let lhs = w.pairing(&t, &form)?.differential(&c)?;
        let rhs = w.differential(&c)?.pairing(&t, &form)?.add(&w.pairing(&t.differential(&c)?, &form)?.scale(&sign(w.degree())))?;
        residual(&lhs, &rhs)
    });
    checks.push(CheckResult::bounded("Leibniz rule for the pairing", r, IDENTITY_TOL));

    let r = over_trials(cfg, 3, |rng| {
        let (w, t) = (form_of(rng, 2)?, form_of(rng, 2)?);
        let lhs = w.bracket(&t)?.differential(&c)?;
        let rhs = w.differential(&c)?.bracket(&t)?.add(&w.bracket(&t.differential(&c)?)?.scale(&sign(w.degree())))?;
        residual(&lhs, &rhs)
    });
    checks.push(CheckResult::bounded("Leibniz rule for the bracket", r, IDENTITY_TOL));

    let r = over_trials(cfg, 4, |rng| {
        let (w, tau, t) = (form_of(rng, 1)?, form_of(rng, 1)?, form_of(rng, 1)?);
        residual(&w.pairing(&tau.bracket(&t)?, &form)?, &w.bracket(&tau)?.pairing(&t, &form)?)
    });
    checks.push(CheckResult::bounded("invariance of the pairing", r, IDENTITY_TOL));

    let r = over_trials(cfg, 5, |rng| {
        let (w, tau, t) = (form_of(rng, 1)?, form_of(rng, 1)?, form_of(rng, 1)?);
        let lhs = w.bracket(&tau.bracket(&t)?)?;
        let rhs = w.bracket(&tau)?.bracket(&t)?.add(&tau.bracket(&w.bracket(&t)?)?.scale(&sign(w.degree() * tau.degree())))?;
        residual(&lhs, &rhs)
    });
    checks.push(CheckResult::bounded("graded Jacobi identity", r, IDENTITY_TOL));

    let r = over_trials(cfg, 6, |rng| {
        let theta = random_form(rng, 6, 1, &g, uniform)?;
        let curv = theta.curvature(&c)?;
        let a = residual(&theta.chern_simons(&form, &c)?.differential(&c)?, &curv.pairing(&curv, &form)?)?;
        let b = residual(&theta.chern_simons_via_curvature(&form, &c)?, &theta.chern_simons(&form, &c)?)?;
        Ok(a.max(b))
    });
    checks.push(CheckResult::bounded("dCS(θ) = ⟨Θ,Θ⟩", r, IDENTITY_TOL));

    let r = over_trials(cfg, 7, |rng| {
        let w = form_of(rng, 4)?;
        Ok(w.differential(&c)?.differential(&c)?.max_abs())
    });
    checks.push(CheckResult::bounded("d∘d = 0", r, IDENTITY_TOL));

    checks.extend(blindness_checks(cfg));
    checks
}

/// Random `so(4)`-valued 1-forms over the `su(2)` coframe satisfy
/// `CS(θ) = CS(θ^⊤) + ⟨θ^⊥, Θ^⊥⟩`.
fn blindness_checks(cfg: &SuiteConfig) -> Vec<CheckResult> {
    const BLINDNESS_TRIALS: usize = 50;
    let setup = || -> Result<_> { Ok((registry::algebra("so4")?, so4_so3_decomposition()?, CoframeComplex::su2())) };
    let (g, d, c) = match setup() {
        Ok(s) => s,
        Err(e) => return vec![CheckResult::failed("blindness setup", &e)],
    };
    let form = d.form().clone();
    let blind_cfg = SuiteConfig {
        trials: BLINDNESS_TRIALS,
        ..cfg.clone()
    };
    let float = over_trials(&blind_cfg, 8, |rng| {
        let theta = random_form(rng, 3, 1, &g, uniform)?;
        Ok(theta.blindness_residual(&d, &form, &c, IDENTITY_TOL)?.max_abs())
    });
    let exact = over_trials(&blind_cfg, 9, |rng| {
        let theta = random_form(rng, 3, 1, &g, small_int)?;
        let r = theta.blindness_residual(&d, &form, &c, 0.0)?;
        Ok(if r.is_zero() { 0.0 } else { r.max_abs().max(f64::MIN_POSITIVE) })
    });
    vec![
        CheckResult::bounded("blindness on random so(4) forms", float, IDENTITY_TOL),
        CheckResult::bounded("blindness on random so(4) forms, exact", exact, 0.0),
    ]
}

fn normalization_checks(cfg: &SuiteConfig) -> Vec<CheckResult> {
    match normalization_so4(&cfg.levels) {
        Ok(n) => {
            let exact = n.subgroup.exact.as_ref().map(crate::scalar::format_rational).unwrap_or_default();
            vec![
                CheckResult {
                    name: "∫_{SO(3)} ι*ζ = 1 (algebraic)".into(),
                    pass: n.subgroup.pass,
                    residual: Some((n.subgroup.value - 1.0).abs()),
                    detail: format!("exact value {exact}"),
                },
                CheckResult {
                    name: "∫_{S³} σ*ζ = 1 (quadrature)".into(),
                    pass: n.section.pass,
                    residual: Some((n.section.value - 1.0).abs()),
                    detail: format!("value {:.12}, error estimate {:.3e}", n.section.value, n.section.error_estimate),
                },
            ]
        }
        Err(e) => vec![CheckResult::failed("normalization", &e)],
    }
}

fn volume_check(name: &str, form: Result<PolyForm>, chart: Chart, rel_tol: f64, levels: &[usize]) -> CheckResult {
    let exact = chart.volume().to_f64();
    let r = form.and_then(|f| grid_refinement_estimate(&f.compile(), &chart, levels)).map(|r| ((r.value - exact) / exact).abs());
    CheckResult::bounded(name, r, rel_tol)
}

fn top_coframe_monomial(base: BaseManifold) -> Result<PolyForm> {
    let w = base.ambient_coframe();
    w[0].wedge(&w[1])?.wedge(&w[2])
}

fn example_checks(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut checks = vec![
        volume_check("∫_{S³} ξ∧ρ∧κ = 2π²", top_coframe_monomial(BaseManifold::Su2), Chart::s3(), 1e-8, &cfg.levels),
        volume_check("∫_{SO(3)} ω₁∧ω₂∧ψ = 8π²", top_coframe_monomial(BaseManifold::So3), Chart::so3(), 1e-6, &cfg.levels),
    ];
    let opts = RunOptions {
        levels: cfg.levels.clone(),
        ..RunOptions::default()
    };

    for lambda in [rat(1, 2), int(1), int(2)] {
        let name = crate::scalar::format_rational(&lambda);
        checks.push(CheckResult::boolean(
            format!("Levi-Civita solver matches the closed form, λ = {name}"),
            berger_lorentz_metric(&lambda)
                .and_then(|m| levi_civita_coframe(&m))
                .map(|theta| (theta == berger_lorentz_closed_form_connection(&lambda), String::new())),
        ));
        checks.push(example_check(&BuiltinExample::BergerLorentz(Some(lambda.clone())), &opts));
        checks.push(CheckResult::boolean(
            format!("berger-lorentz:{name} verdicts"),
            berger_lorentz_example(&lambda).and_then(|e| {
                let report = super::example::cs_invariant_algebraic(&e)?;
                let l22 = report.verdict(VerdictContext::Lorentz22).is_some_and(|v| v.obstructed);
                let l31 = report.verdict(VerdictContext::Lorentz31).is_some_and(|v| v.obstructed);
                let integral = report.exact.as_ref().is_some_and(|q| q.is_integer());
                Ok((l22 && l31 != integral, format!("value {}", report.value)))
            }),
        ));
    }

    checks.push(example_check(&BuiltinExample::Rp3Equiaffine, &opts));
    checks.push(CheckResult::boolean(
        "rp3-equiaffine verdicts",
        super::example::cs_invariant_algebraic(&rp3_equiaffine_example()).map(|r| {
            let eq = r.verdict(VerdictContext::Equiaffine).is_some_and(|v| v.obstructed);
            let riem = r.verdict(VerdictContext::Riemannian).is_some_and(|v| v.obstructed);
            (eq && riem, format!("value {}", r.value))
        }),
    ));
    checks.push(example_check(&BuiltinExample::S3Round, &opts));
    checks.push(CheckResult::boolean(
        "s3-round is not obstructed",
        super::example::cs_invariant_algebraic(&s3_round_example())
            .map(|r| (r.verdict(VerdictContext::Riemannian).is_some_and(|v| !v.obstructed), format!("value {}", r.value))),
    ));

    for case in [SectionCase::DoubleCover, SectionCase::Identity, SectionCase::Constant] {
        let expected = case.expected_delta() as f64;
        checks.push(CheckResult::bounded(
            format!("section change {}: delta = {}", case.name(), case.expected_delta()),
            run_section_change(case, &cfg.levels).map(|c| (c.delta - expected).abs()),
            SECTION_TOL,
        ));
    }
    checks.push(CheckResult::bounded(
        "section change identity keeps the class ½",
        run_section_change(SectionCase::Identity, &cfg.levels)
            .map(|c| mod_distance(c.before.value, 0.5).max(mod_distance(c.after.value, 0.5))),
        SECTION_TOL,
    ));

    for (label, d) in [("so(4)/so(3)", so4_so3_decomposition()), ("sl(4)/sl(3)", sl4_sl3_decomposition())] {
        checks.push(CheckResult::boolean(
            format!("flat extension of round S³ in {label}"),
            d.and_then(|d| round_s3_flat_extension(&d, cfg.seed)).map(|r| {
                let detail = format!(
                    "deviation {:.2e}, bracket {:.2e}, scalar {:.2e}, blindness {:.2e}",
                    r.max_connection_deviation, r.max_bracket_residual, r.max_scalar_component, r.max_blindness_residual
                );
                (r.pass, detail)
            }),
        ));
    }
    checks
}

fn example_check(example: &BuiltinExample, opts: &RunOptions) -> CheckResult {
    CheckResult::boolean(
        format!("{example}: routes agree with the expected value"),
        run_example(example, opts).map(|o| {
            let values: Vec<String> = o.reports.iter().map(|r| format!("{:.9}", r.value)).collect();
            (o.pass, values.join(", "))
        }),
    )
}
