//! Chern–Simons 3-forms and invariants of Lie-algebra-valued 1-forms on
//! parallelizable 3-manifolds.
//!
//! The crate is organised bottom-up:
//!
//! * [`lie`]: matrix Lie algebras, invariant forms, `g̃ = g ⊕ g^⊥` splittings;
//! * [`coframe`]: left-invariant exterior calculus over a global coframe;
//! * [`poly`]: exact forms with polynomial coefficients on `ℝ^N`;
//! * [`quadrature`]: tensor Gauss–Legendre integration over `S³` and `SO(3)`;
//! * [`connections`]: Levi-Civita connections of constant metrics on a coframe;
//! * [`invariants`]: assembling `c_σ`, normalizations, verdicts and suites.

pub mod coframe;
pub mod connections;
pub mod error;
pub mod invariants;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{PiMultiple, Rational, Scalar};
