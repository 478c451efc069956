use std::fmt;

use serde::Serialize;

use crate::scalar::Rational;

/// The immersion problem a Chern–Simons value is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictContext {
    /// Isometric immersion of a Riemannian 3-manifold into `E⁴`.
    Riemannian,
    /// Isometric immersion of a Lorentzian 3-manifold into `ℝ^{2,2}`.
    #[serde(rename = "lorentz_22")]
    Lorentz22,
    /// Isometric immersion of a Lorentzian 3-manifold into `ℝ^{3,1}`.
    #[serde(rename = "lorentz_31")]
    Lorentz31,
    /// Equiaffine immersion into `ℝ⁴`.
    Equiaffine,
}

impl VerdictContext {
    pub const ALL: [VerdictContext; 4] = [Self::Riemannian, Self::Lorentz22, Self::Lorentz31, Self::Equiaffine];

    /// Whether the invariant lives in `ℝ/ℤ` (obstruction iff non-integer)
    /// rather than in `ℝ` (obstruction iff nonzero).
    pub fn is_mod_integers(self) -> bool {
        !matches!(self, Self::Lorentz22)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Riemannian => "riemannian",
            Self::Lorentz22 => "lorentz_22",
            Self::Lorentz31 => "lorentz_31",
            Self::Equiaffine => "equiaffine",
        }
    }

    fn target(self) -> &'static str {
        match self {
            Self::Riemannian => "no isometric immersion into E⁴",
            Self::Lorentz22 => "no isometric immersion into ℝ^{2,2}",
            Self::Lorentz31 => "no isometric immersion into ℝ^{3,1}",
            Self::Equiaffine => "no global equiaffine immersion into ℝ⁴",
        }
    }
}

impl fmt::Display for VerdictContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub context: VerdictContext,
    pub obstructed: bool,
    pub text: String,
}

impl Verdict {
    fn new(context: VerdictContext, obstructed: bool) -> Self {
        let text = match (obstructed, context.is_mod_integers()) {
            (true, _) => format!("immersion obstructed: {}", context.target()),
            (false, true) => "not obstructed by this test (integer invariant)".to_string(),
            (false, false) => "not obstructed by this test (invariant vanishes)".to_string(),
        };
        Self {
            context,
            obstructed,
            text,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.context, self.text)
    }
}

/// Verdict for a floating-point invariant; `tol` decides integrality and
/// vanishing.
pub fn obstruction_verdict(value: f64, context: VerdictContext, tol: f64) -> Verdict {
    let obstructed = if context.is_mod_integers() {
        (value - value.round()).abs() > tol
    } else {
        value.abs() > tol
    };
    Verdict::new(context, obstructed)
}

/// Verdict for an exact invariant.
pub fn obstruction_verdict_exact(value: &Rational, context: VerdictContext) -> Verdict {
    let obstructed = if context.is_mod_integers() {
        !value.is_integer()
    } else {
        !num_traits::Zero::is_zero(value)
    };
    Verdict::new(context, obstructed)
}

/// `value − ⌊value⌋` in `[0, 1)`, with values within `tol` of an integer
/// reported as `0`.
pub fn mod_one(value: f64, tol: f64) -> f64 {
    if (value - value.round()).abs() <= tol {
        0.0
    } else {
        value - value.floor()
    }
}

pub fn mod_one_exact(value: &Rational) -> Rational {
    value - value.floor()
}
