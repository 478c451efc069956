use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Mat, RMat};
use crate::scalar::{Rational, Scalar};

/// Tolerance for every floating-point identity check on algebra data.
pub const IDENTITY_TOL: f64 = 1e-12;

/// A finite-dimensional real matrix Lie algebra with a fixed basis.
///
/// Basis matrices are stored with exact rational entries, and the structure
/// constants `c^k_{ij}` (with `[b_i, b_j] = Σ_k c^k_{ij} b_k`) are derived
/// from them exactly at construction.
#[derive(Clone)]
pub struct LieAlgebra {
    name: String,
    basis: Vec<RMat>,
    /// `c^k_{ij}` stored at `(i * dim + j) * dim + k`.
    structure: Vec<Rational>,
    /// Nonzero entries of `structure` as `(i, j, k, c^k_{ij})`.
    table: Vec<(usize, usize, usize, Rational)>,
    /// The trace form is `trace_factor · tr(XY)` in this realization.
    ///
    /// Complex matrix algebras are realified (`a + ib ↦ [[a, −b], [b, a]]`),
    /// which doubles real traces; their factor is `1/2`.
    trace_factor: Rational,
}

impl LieAlgebra {
    pub fn from_matrices(name: impl Into<String>, basis: Vec<RMat>) -> Result<Self> {
        let structure = structure_constants_from_matrices(&basis, 0.0)?;
        let n = basis.len();
        let table = structure
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| (idx / (n * n), (idx / n) % n, idx % n, c.clone()))
            .collect();
        Ok(Self {
            name: name.into(),
            basis,
            structure,
            table,
            trace_factor: Rational::one(),
        })
    }

    pub fn with_trace_factor(mut self, factor: Rational) -> Self {
        self.trace_factor = factor;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Size `m` of the `m × m` basis matrices.
    pub fn matrix_size(&self) -> usize {
        self.basis.first().map_or(0, Mat::rows)
    }

    pub fn basis(&self) -> &[RMat] {
        &self.basis
    }

    pub fn trace_factor(&self) -> &Rational {
        &self.trace_factor
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        let n = self.dim();
        &self.structure[(i * n + j) * n + k]
    }

    /// Nonzero structure constants as `(i, j, k, c^k_{ij})`.
    pub fn bracket_table<S: Scalar>(&self) -> Vec<(usize, usize, usize, S)> {
        self.table.iter().map(|(i, j, k, c)| (*i, *j, *k, S::from_rational(c))).collect()
    }

    /// Bracket of two elements given in basis coordinates.
    pub fn bracket<S: Scalar>(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim()];
        for (i, j, k, c) in &self.table {
            if x[*i].is_zero() || y[*j].is_zero() {
                continue;
            }
            out[*k] = out[*k].clone() + S::from_rational(c) * x[*i].clone() * y[*j].clone();
        }
        out
    }

    /// The matrix `Σ x_i b_i`.
    pub fn matrix_of<S: Scalar>(&self, x: &[S]) -> Mat<S> {
        let m = self.matrix_size();
        let mut out = Mat::zeros(m, m);
        for (xi, b) in x.iter().zip(&self.basis) {
            if xi.is_zero() {
                continue;
            }
            out = &out + &b.map(|q| S::from_rational(q) * xi.clone());
        }
        out
    }

    /// Basis coordinates of a matrix in the span of the basis.
    pub fn coordinates<S: Scalar>(&self, m: &Mat<S>, tol: f64) -> Result<Vec<S>> {
        let (x, residual) = self.basis_columns::<S>().solve_overdetermined(m.as_slice(), tol)?;
        if residual.iter().all(|r| r.is_negligible(tol)) {
            Ok(x)
        } else {
            Err(Error::NotClosed { i: 0, j: 0 })
        }
    }

    fn basis_columns<S: Scalar>(&self) -> Mat<S> {
        let m = self.matrix_size();
        Mat::from_fn(m * m, self.dim(), |r, c| S::from_rational(&self.basis[c].as_slice()[r]))
    }

    /// Largest absolute Jacobi residual over all basis triples.
    pub fn jacobi_residual(&self) -> Rational {
        jacobi_residual(&self.structure, self.dim())
    }

    /// `trace_factor · tr(XY)` on basis elements, as a Gram matrix.
    pub fn trace_gram(&self) -> RMat {
        let n = self.dim();
        RMat::from_fn(n, n, |i, j| (&self.basis[i] * &self.basis[j]).trace() * &self.trace_factor)
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("matrix_size", &self.matrix_size())
            .finish()
    }
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.basis == other.basis
    }
}

/// Structure constants of the span of `basis`, flattened as `(i·n + j)·n + k`.
///
/// With exact scalars pass `tol = 0`; closure and independence are then
/// decided exactly. With floats, brackets whose residual outside the span
/// exceeds `tol` are reported as [`Error::NotClosed`].
pub fn structure_constants_from_matrices<S: Scalar>(basis: &[Mat<S>], tol: f64) -> Result<Vec<S>> {
    let n = basis.len();
    let Some(first) = basis.first() else {
        return Ok(Vec::new());
    };
    let m = first.rows();
    if let Some(bad) = basis.iter().find(|b| !b.is_square() || b.rows() != m) {
        return Err(Error::ShapeMismatch {
            rows: bad.rows(),
            cols: bad.cols(),
        });
    }
    let columns = Mat::from_fn(m * m, n, |r, c| basis[c].as_slice()[r].clone());
    let rank = columns.rank(tol);
    if rank < n {
        return Err(Error::DependentBasis { rank, dim: n });
    }
    let mut out = vec![S::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            let bracket = basis[i].commutator(&basis[j]);
            let (x, residual) = columns.solve_overdetermined(bracket.as_slice(), tol)?;
            if !residual.iter().all(|r| r.is_negligible(tol)) {
                return Err(Error::NotClosed { i, j });
            }
            for (k, v) in x.into_iter().enumerate() {
                out[(i * n + j) * n + k] = v;
            }
        }
    }
    Ok(out)
}

/// Largest Jacobi residual `Σ_m (c^m_{ij}c^l_{mk} + c^m_{jk}c^l_{mi} + c^m_{ki}c^l_{mj})`.
pub fn jacobi_residual<S: Scalar>(c: &[S], n: usize) -> S {
    let at = |i: usize, j: usize, k: usize| &c[(i * n + j) * n + k];
    let mut worst = S::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut sum = S::zero();
                    for m in 0..n {
                        sum = sum
                            + at(i, j, m).clone() * at(m, k, l).clone()
                            + at(j, k, m).clone() * at(m, i, l).clone()
                            + at(k, i, m).clone() * at(m, j, l).clone();
                    }
                    if sum.magnitude() > worst.magnitude() {
                        worst = sum;
                    }
                }
            }
        }
    }
    worst
}
