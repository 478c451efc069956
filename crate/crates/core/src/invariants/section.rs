use serde::Serialize;

use super::gauge::{integrate_trace_cs, GaugedChernSimons};
use crate::error::Result;
use crate::linalg::RMat;
use crate::poly::{FormMatrix, Polynomial, PolyMatrixMap};
use crate::quadrature::{grid_refinement_estimate, Chart, Refinement};
use crate::scalar::PiMultiple;

/// `c_σ` and `c_σ̂` for `σ̂ = σ·h`, each from its own quadrature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionChange {
    /// `∫ CS(θ)` for the pulled-back connection `θ = σ*θ_P`.
    pub before: Refinement,
    /// `∫ CS(h⁻¹θh + h⁻¹dh)`.
    pub after: Refinement,
    pub delta: f64,
    /// Sum of the two refinement error estimates.
    pub error_estimate: f64,
}

impl SectionChange {
    /// The difference as a refinement record, level by level.
    pub fn delta_refinement(&self) -> Refinement {
        Refinement {
            value: self.delta,
            error_estimate: self.error_estimate,
            levels: self
                .before
                .levels
                .iter()
                .zip(&self.after.levels)
                .map(|(&(n, b), &(_, a))| (n, a - b))
                .collect(),
        }
    }
}

/// `c_σ̂ − c_σ` where `θ` is the connection pulled back along `σ` and `h`
/// is the change of section.
///
/// `c_σ` integrates the expanded polynomial Chern–Simons form of `θ`;
/// `c_σ̂` evaluates the gauge-transformed form pointwise.
pub fn section_change_delta(
    theta: &FormMatrix,
    h: &PolyMatrixMap,
    scale: &PiMultiple,
    chart: &Chart,
    levels: &[usize],
) -> Result<SectionChange> {
    let before = integrate_trace_cs(theta, scale, chart, levels)?;
    let after = grid_refinement_estimate(&GaugedChernSimons::new(theta, h, scale)?, chart, levels)?;
    Ok(SectionChange {
        delta: after.value - before.value,
        error_estimate: before.error_estimate + after.error_estimate,
        before,
        after,
    })
}

/// The constant map `x ↦ m` on `ℝ^nvars`.
pub fn constant_map(m: &RMat, nvars: usize, domain: crate::poly::Domain) -> Result<PolyMatrixMap> {
    let entries = m.as_slice().iter().map(|c| Polynomial::constant(nvars, c.clone())).collect();
    PolyMatrixMap::new(m.rows(), entries, crate::poly::GroupKind::Orthogonal, domain)
}
