use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::base::BaseManifold;
use super::example::{cs_invariant_algebraic, cs_invariant_quadrature, ConnectionSource, ExampleSpec};
use super::normalization::normalization_so4;
use super::report::InvariantReport;
use super::section::{constant_map, section_change_delta, SectionChange};
use super::verdict::VerdictContext;
use crate::connections::{berger_lorentz_metric, round_rp3_metric, ConnectionMatrix, MetricSpec};
use crate::error::{Error, Result};
use crate::linalg::RMat;
use crate::poly::standard::{conjugate_rotation_double_cover, so3_inclusion};
use crate::poly::{trace_cs_poly, Domain, FormMatrix};
use crate::quadrature::{DEFAULT_LEVELS, Chart};
use crate::scalar::{format_rational, int, parse_rational, rat, PiMultiple, Rational};

/// Allowed disagreement between the algebraic and quadrature routes.
pub const ROUTE_TOL: f64 = 1e-6;
/// Allowed distance of a section-change delta from its integer.
pub const SECTION_TOL: f64 = 1e-4;

pub const EXAMPLE_NAMES: [&str; 7] = [
    "berger-lorentz",
    "rp3-equiaffine",
    "so4-normalization",
    "s3-round",
    "section-change:double-cover",
    "section-change:identity",
    "section-change:constant",
];

/// Registered names whose invariants need a Cartan connection with a
/// structure group smaller than the model group.
pub const OUT_OF_SCOPE_NAMES: [&str; 2] = ["burns-epstein", "legendrian-contact"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionCase {
    /// Trivial connection on `S³`, `h` the degree-two cover `S³ → SO(3)`.
    DoubleCover,
    /// The `ℝP³` connection on `SO(3)`, `h` the identity map.
    Identity,
    /// The round `S³` connection, `h` a constant rotation.
    Constant,
}

impl SectionCase {
    pub fn name(self) -> &'static str {
        match self {
            Self::DoubleCover => "double-cover",
            Self::Identity => "identity",
            Self::Constant => "constant",
        }
    }

    pub fn expected_delta(self) -> i64 {
        match self {
            Self::DoubleCover => 2,
            Self::Identity => 1,
            Self::Constant => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinExample {
    /// `λ = None` defers to [`RunOptions::lambda`], then to `λ = 1`.
    BergerLorentz(Option<Rational>),
    Rp3Equiaffine,
    So4Normalization,
    S3Round,
    SectionChange(SectionCase),
}

impl BuiltinExample {
    pub fn parse(name: &str) -> Result<Self> {
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let no_arg = |e: Self| match arg {
            None => Ok(e),
            Some(_) => Err(Error::UnknownExample(name.to_string())),
        };
        match head {
            "berger-lorentz" => match arg {
                None => Ok(Self::BergerLorentz(None)),
                Some(a) => {
                    let (lambda, _) = parse_rational(a)?;
                    Ok(Self::BergerLorentz(Some(lambda)))
                }
            },
            "rp3-equiaffine" => no_arg(Self::Rp3Equiaffine),
            "so4-normalization" => no_arg(Self::So4Normalization),
            "s3-round" => no_arg(Self::S3Round),
            "section-change" => match arg {
                Some("double-cover") => Ok(Self::SectionChange(SectionCase::DoubleCover)),
                Some("identity") => Ok(Self::SectionChange(SectionCase::Identity)),
                Some("constant") => Ok(Self::SectionChange(SectionCase::Constant)),
                _ => Err(Error::UnknownExample(name.to_string())),
            },
            h if OUT_OF_SCOPE_NAMES.contains(&h) => Err(Error::OutOfScope(name.to_string())),
            _ => Err(Error::UnknownExample(name.to_string())),
        }
    }
}

impl fmt::Display for BuiltinExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BergerLorentz(None) => f.write_str("berger-lorentz"),
            Self::BergerLorentz(Some(l)) => write!(f, "berger-lorentz:{}", format_rational(l)),
            Self::Rp3Equiaffine => f.write_str("rp3-equiaffine"),
            Self::So4Normalization => f.write_str("so4-normalization"),
            Self::S3Round => f.write_str("s3-round"),
            Self::SectionChange(c) => write!(f, "section-change:{}", c.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub lambda: Option<Rational>,
    pub levels: Vec<usize>,
    pub dump_forms: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            lambda: None,
            levels: DEFAULT_LEVELS.to_vec(),
            dump_forms: false,
        }
    }
}

/// A form rendered in its text format.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DumpedForm {
    pub name: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleOutcome {
    pub example: String,
    pub reports: Vec<InvariantReport>,
    /// `|algebraic − quadrature|` when both routes ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route_difference: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<DumpedForm>,
    pub pass: bool,
}

/// `λ⁴ + 2λ² + 2`.
pub fn berger_lorentz_closed_form_value(lambda: &Rational) -> Rational {
    let l2 = lambda * lambda;
    &l2 * &l2 + &l2 * int(2) + int(2)
}

/// `[[0, −(λ²+2)κ, −λρ], [(λ²+2)κ, 0, λξ], [−λρ, λξ, 0]]` in `(ξ, ρ, κ)`.
pub fn berger_lorentz_closed_form_connection(lambda: &Rational) -> ConnectionMatrix {
    let l = lambda.clone();
    let k = &l * &l + int(2);
    let z = Rational::zero;
    let lin = |a: Rational, b: Rational, c: Rational| vec![a, b, c];
    ConnectionMatrix::new(
        vec![1, 1, -1],
        vec![
            vec![lin(z(), z(), z()), lin(z(), z(), -k.clone()), lin(z(), -l.clone(), z())],
            vec![lin(z(), z(), k), lin(z(), z(), z()), lin(l.clone(), z(), z())],
            vec![lin(z(), -l.clone(), z()), lin(l, z(), z()), lin(z(), z(), z())],
        ],
    )
    .expect("3×3×3 entries")
}

pub fn berger_lorentz_example(lambda: &Rational) -> Result<ExampleSpec> {
    let metric = berger_lorentz_metric(lambda)?;
    let algebra = metric.structure_algebra()?;
    Ok(ExampleSpec::with_trace_form(
        format!("berger-lorentz:{}", format_rational(lambda)),
        BaseManifold::Su2,
        ConnectionSource::LeviCivita(metric),
        &algebra,
        Some(berger_lorentz_closed_form_value(lambda)),
        vec![VerdictContext::Lorentz22, VerdictContext::Lorentz31],
    ))
}

pub fn rp3_equiaffine_example() -> ExampleSpec {
    let metric = round_rp3_metric();
    let algebra = metric.structure_algebra().expect("so3 is built in");
    ExampleSpec::with_trace_form(
        "rp3-equiaffine",
        BaseManifold::So3,
        ConnectionSource::LeviCivita(metric),
        &algebra,
        Some(rat(1, 2)),
        vec![VerdictContext::Equiaffine, VerdictContext::Riemannian],
    )
}

pub fn s3_round_example() -> ExampleSpec {
    let metric = MetricSpec::new(BaseManifold::Su2.complex(), RMat::identity(3)).expect("identity Gram matrix");
    let algebra = metric.structure_algebra().expect("so3 is built in");
    ExampleSpec::with_trace_form(
        "s3-round",
        BaseManifold::Su2,
        ConnectionSource::LeviCivita(metric),
        &algebra,
        None,
        vec![VerdictContext::Riemannian],
    )
}

/// Connection, change of section, chart and trace scale for a case.
pub fn section_case_data(case: SectionCase) -> Result<(FormMatrix, crate::poly::PolyMatrixMap, Chart, PiMultiple)> {
    let scale = PiMultiple::sixteen_pi_sq_inv();
    match case {
        SectionCase::DoubleCover => {
            Ok((FormMatrix::zero(3, 4, 1)?, conjugate_rotation_double_cover(), Chart::s3(), scale))
        }
        SectionCase::Identity => {
            let theta = rp3_equiaffine_example().ambient_connection()?;
            Ok((theta, so3_inclusion(), Chart::so3(), scale))
        }
        SectionCase::Constant => {
            let theta = s3_round_example().ambient_connection()?;
            let cycle = RMat::from_rows(vec![
                vec![int(0), int(0), int(1)],
                vec![int(1), int(0), int(0)],
                vec![int(0), int(1), int(0)],
            ]);
            Ok((theta, constant_map(&cycle, 4, Domain::UnitSphere)?, Chart::s3(), scale))
        }
    }
}

pub fn run_section_change(case: SectionCase, levels: &[usize]) -> Result<SectionChange> {
    let (theta, h, chart, scale) = section_case_data(case)?;
    section_change_delta(&theta, &h, &scale, &chart, levels)
}

fn run_spec(spec: &ExampleSpec, opts: &RunOptions) -> Result<ExampleOutcome> {
    let algebraic = cs_invariant_algebraic(spec)?;
    let (quadrature, _) = cs_invariant_quadrature(spec, &opts.levels, ROUTE_TOL)?;
    let difference = (algebraic.value - quadrature.value).abs();
    let mut forms = Vec::new();
    if opts.dump_forms {
        let complex = spec.base.complex();
        let theta = spec.connection_form()?;
        forms.push(DumpedForm {
            name: "connection".into(),
            text: theta.to_text(),
        });
        forms.push(DumpedForm {
            name: "chern-simons".into(),
            text: theta.chern_simons(&spec.form, &complex)?.to_text(),
        });
        let ambient = trace_cs_poly(&spec.ambient_connection()?, &spec.trace_scale()?)?;
        forms.push(DumpedForm {
            name: format!("chern-simons-ambient (times π^{})", ambient.pi_power),
            text: ambient.form.to_text(),
        });
    }
    let pass = algebraic.pass && quadrature.pass && difference <= ROUTE_TOL;
    Ok(ExampleOutcome {
        example: spec.name.clone(),
        reports: vec![algebraic, quadrature],
        route_difference: Some(difference),
        forms,
        pass,
    })
}

pub fn run_example(example: &BuiltinExample, opts: &RunOptions) -> Result<ExampleOutcome> {
    match example {
        BuiltinExample::BergerLorentz(named) => {
            let lambda = match (named, &opts.lambda) {
                (Some(a), Some(b)) if a != b => {
                    return Err(Error::InvalidConfig(format!(
                        "λ given twice: {} and {}",
                        format_rational(a),
                        format_rational(b)
                    )))
                }
                (Some(a), _) | (None, Some(a)) => a.clone(),
                (None, None) => int(1),
            };
            run_spec(&berger_lorentz_example(&lambda)?, opts)
        }
        BuiltinExample::Rp3Equiaffine => run_spec(&rp3_equiaffine_example(), opts),
        BuiltinExample::S3Round => run_spec(&s3_round_example(), opts),
        BuiltinExample::So4Normalization => {
            let n = normalization_so4(&opts.levels)?;
            let pass = n.pass();
            Ok(ExampleOutcome {
                example: example.to_string(),
                reports: vec![n.subgroup, n.section],
                route_difference: None,
                forms: Vec::new(),
                pass,
            })
        }
        BuiltinExample::SectionChange(case) => {
            let (theta, h, chart, scale) = section_case_data(*case)?;
            let change = section_change_delta(&theta, &h, &scale, &chart, &opts.levels)?;
            let contexts: &[VerdictContext] = match case {
                SectionCase::Identity => &[VerdictContext::Equiaffine, VerdictContext::Riemannian],
                _ => &[VerdictContext::Riemannian],
            };
            let before = InvariantReport::quadrature("c_σ", &change.before, &chart, contexts, None, SECTION_TOL);
            let after = InvariantReport::quadrature("c_σ̂", &change.after, &chart, contexts, None, SECTION_TOL);
            let delta = InvariantReport::quadrature(
                "c_σ̂ − c_σ",
                &change.delta_refinement(),
                &chart,
                &[],
                Some(case.expected_delta() as f64),
                SECTION_TOL,
            );
            let class_kept = matches!((before.mod_one, after.mod_one), (Some(a), Some(b)) if mod_distance(a, b) <= SECTION_TOL);
            let pass = before.pass && after.pass && delta.pass && class_kept;
            Ok(ExampleOutcome {
                example: example.to_string(),
                reports: vec![before, after, delta],
                route_difference: None,
                forms: Vec::new(),
                pass,
            })
        }
    }
}

/// Distance between two classes in `ℝ/ℤ`.
pub fn mod_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}
