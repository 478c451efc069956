//! Matrix Lie algebras, invariant bilinear forms and orthogonal splittings.

mod algebra;
mod bilinear;
mod decomposition;
pub mod registry;

pub use algebra::{jacobi_residual, structure_constants_from_matrices, LieAlgebra, IDENTITY_TOL};
pub use bilinear::{check_ad_invariance, maurer_cartan_cs_tensor, BilinearForm, CsTensor};
pub use decomposition::OrthogonalDecomposition;
