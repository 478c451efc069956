//! Exact differential forms with polynomial coefficients on `ℝ^N`, and
//! pullbacks of Maurer–Cartan forms along polynomial matrix maps.

mod form;
mod matrix;
mod polynomial;
pub mod standard;

pub use form::{CompiledForm, PolyForm};
pub use matrix::{trace_cs_poly, Domain, FormMatrix, GroupKind, PolyMatrixMap, ScaledForm};
pub use polynomial::{CompiledPolynomial, Monomial, Polynomial, MAX_PARSED_EXPONENT};
