use std::sync::Arc;

use num_traits::Zero;

use super::base::BaseManifold;
use super::gauge::integrate_trace_cs;
use super::report::InvariantReport;
use super::verdict::VerdictContext;
use crate::coframe::{Blade, ValuedForm};
use crate::connections::{levi_civita_coframe, MetricSpec};
use crate::error::{Error, Result};
use crate::lie::{BilinearForm, LieAlgebra};
use crate::poly::{FormMatrix, PolyForm, PolyMatrixMap};
use crate::quadrature::{Chart, Refinement};
use crate::scalar::{PiMultiple, Rational};

/// Where the connection of an example comes from.
#[derive(Debug, Clone)]
pub enum ConnectionSource {
    /// The Levi-Civita connection of a left-invariant metric.
    LeviCivita(MetricSpec),
    /// A constant algebra-valued 1-form on the base coframe.
    Explicit(ValuedForm<Rational>),
    /// The pullback `σ*μ` of the Maurer–Cartan form along a polynomial map.
    Section(PolyMatrixMap),
}

/// A connection on a parallelized group together with the pairing used
/// for its Chern–Simons form.
#[derive(Debug, Clone)]
pub struct ExampleSpec {
    pub name: String,
    pub base: BaseManifold,
    pub connection: ConnectionSource,
    pub form: BilinearForm,
    pub expected: Option<Rational>,
    pub contexts: Vec<VerdictContext>,
}

impl ExampleSpec {
    /// An example whose pairing is the normalized trace form of the
    /// connection's algebra.
    pub fn with_trace_form(
        name: impl Into<String>,
        base: BaseManifold,
        connection: ConnectionSource,
        algebra: &Arc<LieAlgebra>,
        expected: Option<Rational>,
        contexts: Vec<VerdictContext>,
    ) -> Self {
        Self {
            name: name.into(),
            base,
            connection,
            form: BilinearForm::normalized_trace(algebra),
            expected,
            contexts,
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        self.form.algebra()
    }

    /// The connection as a constant form on the base coframe; sections have
    /// no such representation.
    pub fn connection_form(&self) -> Result<ValuedForm<Rational>> {
        let theta = match &self.connection {
            ConnectionSource::LeviCivita(metric) => {
                if metric.complex() != &self.base.complex() {
                    return Err(Error::InvalidConfig(format!("{}: metric is not on the base coframe", self.name)));
                }
                levi_civita_coframe(metric)?.to_valued_form(self.algebra())?
            }
            ConnectionSource::Explicit(theta) => theta.clone(),
            ConnectionSource::Section(_) => {
                return Err(Error::InvalidConfig(format!(
                    "{}: a section has no constant coframe representation",
                    self.name
                )))
            }
        };
        if theta.rank() != self.base.complex().rank() || theta.degree() != 1 {
            return Err(Error::InvalidConfig(format!("{}: connection is not a 1-form on the base", self.name)));
        }
        Ok(theta)
    }

    /// The connection as a matrix of polynomial 1-forms on the ambient space
    /// of the base.
    pub fn ambient_connection(&self) -> Result<FormMatrix> {
        if let ConnectionSource::Section(sigma) = &self.connection {
            return Ok(sigma.mc_pullback());
        }
        let theta = self.connection_form()?;
        let coframe = self.base.ambient_coframe();
        let g = self.algebra();
        let n = g.matrix_size();
        let nvars = coframe[0].nvars();
        let mut entries = vec![PolyForm::zero(nvars, 1)?; n * n];
        for (k, omega) in coframe.iter().enumerate() {
            let m = g.matrix_of(&theta.component(&[k]));
            for (e, entry) in entries.iter_mut().enumerate() {
                let c = &m[(e / n, e % n)];
                if !c.is_zero() {
                    *entry = entry.add(&omega.scale(c))?;
                }
            }
        }
        FormMatrix::from_entries(n, entries)
    }

    /// `scale · trace_factor`: the multiple of the plain matrix trace that
    /// equals the example's pairing. Fails unless the pairing is a trace form.
    pub fn trace_scale(&self) -> Result<PiMultiple> {
        let g = self.algebra();
        if self.form.gram() != &g.trace_gram() {
            return Err(Error::InvalidConfig(format!(
                "{}: the quadrature route needs a multiple of the trace form",
                self.name
            )));
        }
        Ok(self.form.scale().scale(g.trace_factor()))
    }
}

/// Coefficient of the top coframe monomial of `CS(θ)` times the base
/// volume, with the π powers cancelled exactly.
pub fn cs_invariant_algebraic(e: &ExampleSpec) -> Result<InvariantReport> {
    let complex = e.base.complex();
    let theta = e.connection_form()?;
    let cs = theta.chern_simons(&e.form, &complex)?;
    let top = (0..complex.rank()).collect::<Vec<_>>();
    let top_blade = Blade::from_indices(&top).map(|(b, _)| b);
    if cs.terms().any(|(b, _)| Some(b) != top_blade) {
        return Err(Error::NotInvariant);
    }
    let coefficient = PiMultiple::new(cs.scalar_component(&top), e.form.pi_power());
    let value = &coefficient * &e.base.volume();
    let exact = value
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::InvalidConfig(format!("{}: π powers do not cancel ({value})", e.name)))?;
    Ok(InvariantReport::algebraic(&e.name, exact, &e.contexts, e.expected.as_ref()))
}

/// Quadrature of `σ*CS(μ)` for a polynomial map `σ` into a matrix group.
pub fn cs_invariant_numeric(
    name: impl Into<String>,
    sigma: &PolyMatrixMap,
    scale: &PiMultiple,
    chart: &Chart,
    levels: &[usize],
    expected: Option<f64>,
    tolerance: f64,
) -> Result<InvariantReport> {
    let refinement = integrate_trace_cs(&sigma.mc_pullback(), scale, chart, levels)?;
    Ok(InvariantReport::quadrature(name, &refinement, chart, &[], expected, tolerance))
}

/// The example's invariant by quadrature over the base chart.
pub fn cs_invariant_quadrature(e: &ExampleSpec, levels: &[usize], tolerance: f64) -> Result<(InvariantReport, Refinement)> {
    let chart = e.base.chart();
    let refinement = integrate_trace_cs(&e.ambient_connection()?, &e.trace_scale()?, &chart, levels)?;
    let expected = e.expected.as_ref().map(crate::scalar::rational_to_f64);
    let report = InvariantReport::quadrature(&e.name, &refinement, &chart, &e.contexts, expected, tolerance);
    Ok((report, refinement))
}
