//! Left-invariant exterior calculus over a global coframe.
//!
//! Forms have constant coefficients in the coframe basis, so the exterior
//! derivative is the algebraic operator determined by the structure
//! equations `dω^k = −½ f^k_{ij} ω^i∧ω^j`.

mod blade;
mod complex;
mod form;
mod text;

pub use blade::{Blade, MAX_RANK};
pub use complex::CoframeComplex;
pub use form::{ValueSpace, ValuedForm};
