//! Polynomial maps and forms used by the built-in examples.

use super::form::PolyForm;
use super::matrix::{Domain, GroupKind, PolyMatrixMap};
use super::polynomial::Polynomial;
use crate::scalar::int;

fn x(i: usize) -> Polynomial {
    Polynomial::var(4, i)
}

fn linear(coeffs: [i64; 4]) -> Polynomial {
    Polynomial::linear(&coeffs)
}

/// Left multiplication by the unit quaternion `x₁ + x₂i + x₃j + x₄k`,
/// a section `S³ → SO(4)`.
pub fn quaternion_section() -> PolyMatrixMap {
    let rows = [
        [1, -2, -3, -4],
        [2, 1, 4, -3],
        [3, -4, 1, 2],
        [4, 3, -2, 1],
    ];
    let entries = rows
        .iter()
        .flat_map(|row| {
            row.iter().map(|&s: &i64| {
                let v = x(s.unsigned_abs() as usize - 1);
                if s < 0 {
                    -&v
                } else {
                    v
                }
            })
        })
        .collect();
    PolyMatrixMap::new(4, entries, GroupKind::Orthogonal, Domain::UnitSphere).expect("unit quaternions act orthogonally")
}

/// The left-invariant coframe `(ξ, ρ, κ)` of `SU(2) ≅ S³` in ambient
/// coordinates. On the sphere `dξ = −2ρ∧κ`, `dρ = 2ξ∧κ`, `dκ = −2ξ∧ρ`.
pub fn su2_coframe() -> [PolyForm; 3] {
    let one_form = |rows: [[i64; 4]; 4]| PolyForm::one_form(&rows.map(linear));
    [
        one_form([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]]),
        one_form([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]),
        one_form([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]),
    ]
}

/// The rotation `v ↦ q v q̄` of the unit quaternion `q = (x₁, x₂, x₃, x₄)`,
/// a two-to-one map `S³ → SO(3)`.
pub fn rotation_double_cover() -> PolyMatrixMap {
    let two = int(2);
    let sq = |i: usize| x(i).pow(2);
    let pr = |i: usize, j: usize| (&x(i) * &x(j)).scale(&two);
    let (a, b, c, d) = (0, 1, 2, 3);
    let entries = vec![
        &(&sq(a) + &sq(b)) - &(&sq(c) + &sq(d)),
        &pr(b, c) - &pr(a, d),
        &pr(b, d) + &pr(a, c),
        &pr(b, c) + &pr(a, d),
        &(&sq(a) - &sq(b)) + &(&sq(c) - &sq(d)),
        &pr(c, d) - &pr(a, b),
        &pr(b, d) - &pr(a, c),
        &pr(c, d) + &pr(a, b),
        &(&sq(a) - &sq(b)) - &(&sq(c) - &sq(d)),
    ];
    PolyMatrixMap::new(3, entries, GroupKind::Orthogonal, Domain::UnitSphere).expect("rotations are orthogonal")
}

/// The rotation `v ↦ q̄ v q`, the transpose of [`rotation_double_cover`].
/// With `S³` oriented by `ξ∧ρ∧κ` and `SO(3)` by `ω₁∧ω₂∧ψ` this cover has
/// degree `+2` and the other one `−2`.
pub fn conjugate_rotation_double_cover() -> PolyMatrixMap {
    let h = rotation_double_cover();
    let entries = (0..9).map(|k| h.get(k % 3, k / 3).clone()).collect();
    PolyMatrixMap::new(3, entries, GroupKind::Orthogonal, Domain::UnitSphere).expect("rotations are orthogonal")
}

/// The inclusion `SO(3) ⊂ ℝ⁹`, matrix entries as row-major coordinates.
/// Orthogonality holds on the image only.
pub fn so3_inclusion() -> PolyMatrixMap {
    let entries = (0..9).map(|i| Polynomial::var(9, i)).collect();
    PolyMatrixMap::new(3, entries, GroupKind::Orthogonal, Domain::Trusted).expect("trusted domain")
}

/// The constant map to the identity of `SO(n)` on `ℝ^N`.
pub fn constant_identity(n: usize, nvars: usize, domain: Domain) -> PolyMatrixMap {
    let entries = (0..n * n)
        .map(|k| if k / n == k % n { Polynomial::one(nvars) } else { Polynomial::zero(nvars) })
        .collect();
    PolyMatrixMap::new(n, entries, GroupKind::Orthogonal, domain).expect("identity is orthogonal")
}
