//! Built-in matrix Lie algebras.
//!
//! | name   | realization                                                 |
//! |--------|-------------------------------------------------------------|
//! | `so3`  | 3×3 antisymmetric, basis `(ω₁, ω₂, ψ) = (E₂₁−E₁₂, E₃₁−E₁₃, E₃₂−E₂₃)` |
//! | `su2`  | 2×2 anti-Hermitian trace-free, basis `(ξ, ρ, κ)`, realified |
//! | `so4`  | 4×4 antisymmetric, pairs `(1,2) (1,3) (1,4) (2,3) (2,4) (3,4)` |
//! | `sl3`, `sl4` | trace-free, diagonal generators first               |
//! | `so21` | `η = diag(1, 1, −1)`                                       |
//! | `so31` | `η = diag(1, 1, 1, −1)`                                    |
//! | `so22` | `η = diag(−1, 1, 1, −1)`                                   |
//!
//! The Lorentzian ambient algebras put the normal direction first so that
//! `so21` sits in the lower-right block.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::RMat;
use crate::scalar::{int, rat, Rational};

pub const NAMES: [&str; 8] = ["so3", "su2", "so4", "sl3", "sl4", "so21", "so31", "so22"];

/// A shared instance of a built-in algebra, built on first use.
pub fn algebra(name: &str) -> Result<Arc<LieAlgebra>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<LieAlgebra>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().expect("registry lock").get(name) {
        return Ok(Arc::clone(g));
    }
    let g = build(name)?;
    cache.lock().expect("registry lock").insert(name.to_string(), Arc::clone(&g));
    Ok(g)
}

fn build(name: &str) -> Result<Arc<LieAlgebra>> {
    let alg = match name {
        "so3" => so_eta("so3", &[1, 1, 1]),
        "so4" => so_eta("so4", &[1, 1, 1, 1]),
        "so21" => so_eta("so21", &[1, 1, -1]),
        "so31" => so_eta("so31", &[1, 1, 1, -1]),
        "so22" => so_eta("so22", &[-1, 1, 1, -1]),
        "sl3" => sl(3),
        "sl4" => sl(4),
        "su2" => su2(),
        other => return Err(Error::UnknownAlgebra(other.to_string())),
    }?;
    Ok(Arc::new(alg))
}

/// `so(η) = {A : Aᵀη + ηA = 0}` with basis `E_{ji} − η_i η_j E_{ij}`, `i < j`.
pub fn so_eta(name: &str, eta: &[i64]) -> Result<LieAlgebra> {
    let n = eta.len();
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lower = RMat::unit(n, j, i);
            let upper = RMat::unit(n, i, j).scale(&int(eta[i] * eta[j]));
            basis.push(&lower - &upper);
        }
    }
    LieAlgebra::from_matrices(name, basis)
}

pub fn sl(n: usize) -> Result<LieAlgebra> {
    let mut basis = Vec::new();
    for k in 0..n - 1 {
        basis.push(&RMat::unit(n, k, k) - &RMat::unit(n, k + 1, k + 1));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(RMat::unit(n, i, j));
            }
        }
    }
    LieAlgebra::from_matrices(format!("sl{n}"), basis)
}

/// `su(2)` with the basis dual to `(ξ, ρ, κ)`:
/// `E_ξ = [[0,−1],[1,0]]`, `E_ρ = [[0,i],[i,0]]`, `E_κ = [[−i,0],[0,i]]`.
///
/// Complex entries are realified, `a + ib ↦ [[a, −b], [b, a]]`, so the trace
/// factor is `1/2`.
pub fn su2() -> Result<LieAlgebra> {
    let complex = |re: [[i64; 2]; 2], im: [[i64; 2]; 2]| {
        RMat::from_fn(4, 4, |r, c| {
            let (bi, bj) = (r / 2, c / 2);
            let (i, j) = (r % 2, c % 2);
            let v = match (bi, bj) {
                (0, 0) | (1, 1) => re[i][j],
                (0, 1) => -im[i][j],
                _ => im[i][j],
            };
            Rational::from_integer(v.into())
        })
    };
    let basis = vec![
        complex([[0, -1], [1, 0]], [[0, 0], [0, 0]]),
        complex([[0, 0], [0, 0]], [[0, 1], [1, 0]]),
        complex([[0, 0], [0, 0]], [[-1, 0], [0, 1]]),
    ];
    Ok(LieAlgebra::from_matrices("su2", basis)?.with_trace_factor(rat(1, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::bilinear::{check_ad_invariance, BilinearForm};
    use num_traits::Zero;

    #[test]
    fn every_builtin_satisfies_jacobi_exactly() {
        for name in NAMES {
            let g = algebra(name).unwrap();
            assert!(g.jacobi_residual().is_zero(), "{name}");
        }
    }

    #[test]
    fn dimensions() {
        let dims: Vec<_> = NAMES.iter().map(|n| algebra(n).unwrap().dim()).collect();
        assert_eq!(dims, vec![3, 3, 6, 8, 15, 3, 6, 6]);
    }

    #[test]
    fn trace_forms_are_invariant() {
        for name in NAMES {
            let g = algebra(name).unwrap();
            assert!(check_ad_invariance(&BilinearForm::trace(&g)), "{name}");
        }
    }

    #[test]
    fn su2_trace_form_is_minus_two_identity() {
        let g = algebra("su2").unwrap();
        assert_eq!(g.trace_gram(), RMat::identity(3).scale(&int(-2)));
    }

    #[test]
    fn su2_brackets_match_coframe_structure() {
        // dξ = −2ρ∧κ  ⇔  [E_ρ, E_κ] = 2E_ξ, and cyclically.
        let g = algebra("su2").unwrap();
        assert_eq!(*g.structure_constant(1, 2, 0), int(2));
        assert_eq!(*g.structure_constant(2, 0, 1), int(2));
        assert_eq!(*g.structure_constant(0, 1, 2), int(2));
    }

    #[test]
    fn unknown_name() {
        assert!(algebra("e8").is_err());
    }
}
