use serde::{Serialize, Serializer};

use super::verdict::{mod_one, mod_one_exact, obstruction_verdict, obstruction_verdict_exact, Verdict, VerdictContext};
use crate::quadrature::{Chart, Refinement};
use crate::scalar::{format_rational, rational_to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Algebraic,
    Quadrature,
}

/// The chart and grid ladder behind a quadrature value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartInfo {
    pub name: &'static str,
    pub orientation_sign: i8,
    /// `(nodes per axis, value)` per refinement level.
    pub levels: Vec<(usize, f64)>,
}

impl ChartInfo {
    pub fn new(chart: &Chart, refinement: &Refinement) -> Self {
        Self {
            name: chart.name(),
            orientation_sign: chart.orientation_sign,
            levels: refinement.levels.clone(),
        }
    }
}

/// One computed Chern–Simons value.
///
/// `mod_one` is `None` only when every verdict context treats the value as
/// a real number; otherwise it is the class in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub name: String,
    pub value: f64,
    #[serde(serialize_with = "serialize_optional_rational", skip_serializing_if = "Option::is_none")]
    pub exact: Option<Rational>,
    pub route: Route,
    pub error_estimate: f64,
    pub mod_one: Option<f64>,
    pub verdicts: Vec<Verdict>,
    #[serde(rename = "paper_expected")]
    pub expected: Option<f64>,
    /// Allowed `|value − expected|` and error estimate; zero for exact values.
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartInfo>,
    pub pass: bool,
}

fn serialize_optional_rational<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_none(),
    }
}

fn wants_mod_one(contexts: &[VerdictContext]) -> bool {
    contexts.is_empty() || contexts.iter().any(|c| c.is_mod_integers())
}

/// Integrality and vanishing decisions for quadrature values use this
/// tolerance when the report's own tolerance is looser.
pub const VERDICT_TOL: f64 = 1e-6;

impl InvariantReport {
    /// An exact value; passes iff it equals `expected` (when given).
    pub fn algebraic(
        name: impl Into<String>,
        exact: Rational,
        contexts: &[VerdictContext],
        expected: Option<&Rational>,
    ) -> Self {
        let verdicts = contexts.iter().map(|&c| obstruction_verdict_exact(&exact, c)).collect();
        Self {
            name: name.into(),
            value: rational_to_f64(&exact),
            route: Route::Algebraic,
            error_estimate: 0.0,
            mod_one: wants_mod_one(contexts).then(|| rational_to_f64(&mod_one_exact(&exact))),
            verdicts,
            expected: expected.map(rational_to_f64),
            tolerance: 0.0,
            chart: None,
            pass: expected.is_none_or(|e| *e == exact),
            exact: Some(exact),
        }
    }

    /// A quadrature value; passes iff the refinement error and the distance
    /// to `expected` (when given) are both within `tolerance`.
    pub fn quadrature(
        name: impl Into<String>,
        refinement: &Refinement,
        chart: &Chart,
        contexts: &[VerdictContext],
        expected: Option<f64>,
        tolerance: f64,
    ) -> Self {
        let value = refinement.value;
        let decide = tolerance.max(VERDICT_TOL);
        let verdicts = contexts.iter().map(|&c| obstruction_verdict(value, c, decide)).collect();
        let close = expected.is_none_or(|e| (value - e).abs() <= tolerance);
        Self {
            name: name.into(),
            value,
            exact: None,
            route: Route::Quadrature,
            error_estimate: refinement.error_estimate,
            mod_one: wants_mod_one(contexts).then(|| mod_one(value, decide)),
            verdicts,
            expected,
            tolerance,
            chart: Some(ChartInfo::new(chart, refinement)),
            pass: close && refinement.error_estimate <= tolerance,
        }
    }

    pub fn verdict(&self, context: VerdictContext) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.context == context)
    }
}
