use serde::Serialize;

use super::base::BaseManifold;
use super::example::{cs_invariant_algebraic, cs_invariant_numeric, ConnectionSource, ExampleSpec};
use super::report::InvariantReport;
use crate::coframe::{ValueSpace, ValuedForm};
use crate::error::Result;
use crate::lie::{registry, BilinearForm, OrthogonalDecomposition};
use crate::poly::standard::quaternion_section;
use crate::scalar::{rational_to_f64, PiMultiple, Rational};

/// Tolerance for the quadrature half of the normalization check.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// `(∫_{SO(3)} ι*ζ, ∫_{S³} σ*ζ)` for `ζ = CS(μ_{SO(4)})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Normalization {
    pub subgroup: InvariantReport,
    pub section: InvariantReport,
}

impl Normalization {
    pub fn values(&self) -> (f64, f64) {
        (self.subgroup.value, self.section.value)
    }

    pub fn pass(&self) -> bool {
        self.subgroup.pass && self.section.pass
    }
}

/// Both integrals with the normalized trace form `tr/(16π²)`.
pub fn normalization_so4(levels: &[usize]) -> Result<Normalization> {
    normalization_so4_scaled(&PiMultiple::sixteen_pi_sq_inv(), levels)
}

/// Both integrals with the trace form scaled by `scale`; the expected
/// values are `16π² · scale`.
pub fn normalization_so4_scaled(scale: &PiMultiple, levels: &[usize]) -> Result<Normalization> {
    let so4 = registry::algebra("so4")?;
    let so3 = registry::algebra("so3")?;
    let base = BaseManifold::So3;
    let embedding = OrthogonalDecomposition::lower_right_embedding(&so4, &so3)?;
    let iota_mu = ValuedForm::<Rational>::maurer_cartan(&base.complex(), &so3)?
        .apply_linear(&embedding, ValueSpace::Algebra(so4.clone()))?;
    let ratio = scale * &PiMultiple::new(Rational::from_integer(16.into()), 2);
    let expected = ratio.as_rational().cloned();
    let spec = ExampleSpec {
        name: "∫_{SO(3)} ι*ζ".into(),
        base,
        connection: ConnectionSource::Explicit(iota_mu),
        form: BilinearForm::normalized_trace(&so4).with_scale(scale.clone()),
        expected: expected.clone(),
        contexts: Vec::new(),
    };
    let subgroup = cs_invariant_algebraic(&spec)?;
    let section = cs_invariant_numeric(
        "∫_{S³} σ*ζ",
        &quaternion_section(),
        scale,
        &BaseManifold::Su2.chart(),
        levels,
        Some(expected.as_ref().map_or(ratio.to_f64(), rational_to_f64)),
        NORMALIZATION_TOL,
    )?;
    Ok(Normalization { subgroup, section })
}
