use num_traits::Zero;

use super::blade::{Blade, MAX_RANK};
use crate::error::{Error, Result};
use crate::lie::{jacobi_residual, registry, LieAlgebra};
use crate::linalg::RMat;
use crate::scalar::Rational;

/// The exterior algebra generated by a global coframe `ω¹, …, ωⁿ` whose
/// differential is `dω^k = −½ Σ_{ij} f^k_{ij} ω^i∧ω^j` with constant `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoframeComplex {
    labels: Vec<String>,
    /// `f^k_{ij}` at `(i·n + j)·n + k`.
    structure: Vec<Rational>,
    /// `dω^k` as increasing 2-blades with coefficients.
    d_generators: Vec<Vec<(Blade, Rational)>>,
}

impl CoframeComplex {
    pub fn new<L: Into<String>>(labels: Vec<L>, structure: Vec<Rational>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        if n == 0 || n > MAX_RANK {
            return Err(Error::InvalidConfig(format!("coframe rank {n} outside 1..={MAX_RANK}")));
        }
        if structure.len() != n * n * n {
            return Err(Error::ShapeMismatch {
                rows: structure.len(),
                cols: n * n * n,
            });
        }
        let at = |i: usize, j: usize, k: usize| &structure[(i * n + j) * n + k];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if *at(i, j, k) != -at(j, i, k) {
                        return Err(Error::InvalidStructure("antisymmetry f^k_ij = -f^k_ji"));
                    }
                }
            }
        }
        // d∘d = 0 on generators is exactly the Jacobi identity for f.
        if !jacobi_residual(&structure, n).is_zero() {
            return Err(Error::InvalidStructure("d∘d = 0 (Jacobi identity)"));
        }
        let d_generators = (0..n)
            .map(|k| {
                let mut terms = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let f = at(i, j, k);
                        if !f.is_zero() {
                            terms.push((Blade::single(i).wedge(Blade::single(j)).unwrap().0, -f.clone()));
                        }
                    }
                }
                terms
            })
            .collect();
        Ok(Self {
            labels,
            structure,
            d_generators,
        })
    }

    /// The left-invariant coframe of a Lie group dual to the algebra basis,
    /// for which `f = c` (the Maurer–Cartan equation).
    pub fn of_algebra<L: Into<String>>(algebra: &LieAlgebra, labels: Vec<L>) -> Result<Self> {
        let n = algebra.dim();
        let mut structure = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    structure.push(algebra.structure_constant(i, j, k).clone());
                }
            }
        }
        Self::new(labels, structure)
    }

    /// `SU(2) ≅ S³` with `dξ = −2ρ∧κ`, `dρ = −2κ∧ξ`, `dκ = −2ξ∧ρ`.
    pub fn su2() -> Self {
        let g = registry::algebra("su2").expect("built-in algebra");
        Self::of_algebra(&g, vec!["ξ", "ρ", "κ"]).expect("su2 structure is valid")
    }

    /// `SO(3)` with `dω₁ = −ω₂∧ψ`, `dω₂ = ω₁∧ψ`, `dψ = −ω₁∧ω₂`.
    pub fn so3() -> Self {
        let g = registry::algebra("so3").expect("built-in algebra");
        Self::of_algebra(&g, vec!["ω₁", "ω₂", "ψ"]).expect("so3 structure is valid")
    }

    pub fn abelian(n: usize) -> Result<Self> {
        let labels: Vec<String> = (1..=n).map(|i| format!("dx{i}")).collect();
        Self::new(labels, vec![Rational::zero(); n * n * n])
    }

    /// The same complex in the coframe `e^a = Σ_i A^a_i ω^i`.
    pub fn change_frame<L: Into<String>>(&self, a: &RMat, labels: Vec<L>) -> Result<Self> {
        let n = self.rank();
        if a.rows() != n || a.cols() != n {
            return Err(Error::ShapeMismatch {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let b = a.inverse(0.0)?;
        // de^a = A^a_k dω^k with ω^i = B^i_p e^p gives f'^a_{pq} = A^a_k f^k_{ij} B^i_p B^j_q.
        let mut structure = vec![Rational::zero(); n * n * n];
        for (i, j, k, f) in self.nonzero_structure() {
            for p in 0..n {
                let bip = &b[(i, p)];
                if bip.is_zero() {
                    continue;
                }
                for q in 0..n {
                    let bjq = &b[(j, q)];
                    if bjq.is_zero() {
                        continue;
                    }
                    let w = f * bip * bjq;
                    for r in 0..n {
                        let ark = &a[(r, k)];
                        if !ark.is_zero() {
                            structure[(p * n + q) * n + r] += &w * ark;
                        }
                    }
                }
            }
        }
        Self::new(labels, structure)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        let n = self.rank();
        &self.structure[(i * n + j) * n + k]
    }

    fn nonzero_structure(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        let n = self.rank();
        self.structure.iter().enumerate().filter(|(_, f)| !f.is_zero()).map(move |(idx, f)| {
            (idx / (n * n), (idx / n) % n, idx % n, f)
        })
    }

    /// `dω^k` as `(blade, coefficient)` pairs over increasing 2-blades.
    pub fn d_generator(&self, k: usize) -> &[(Blade, Rational)] {
        &self.d_generators[k]
    }

    /// Monomial name such as `ξ∧ρ∧κ`, or `1` for the empty blade.
    pub fn monomial_name(&self, blade: Blade) -> String {
        if blade == Blade::EMPTY {
            return "1".into();
        }
        blade.indices().map(|i| self.labels[i].as_str()).collect::<Vec<_>>().join("∧")
    }
}
