use std::sync::{Arc, OnceLock};

use cs3_core::lie::registry;
use cs3_core::lie::{
    check_ad_invariance, maurer_cartan_cs_tensor, structure_constants_from_matrices, BilinearForm,
    LieAlgebra, OrthogonalDecomposition,
};
use cs3_core::linalg::RMat;
use cs3_core::scalar::{int, rat, PiMultiple, Rational};
use cs3_core::Error;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type IMat = Vec<Vec<i64>>;

fn imat(n: usize, entries: &[(usize, usize, i64)]) -> IMat {
    let mut m = vec![vec![0; n]; n];
    for &(i, j, v) in entries {
        m[i][j] = v;
    }
    m
}

fn icommutator(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
            }
        }
    }
    out
}

fn to_rmat(m: &IMat) -> RMat {
    RMat::from_fn(m.len(), m.len(), |i, j| int(m[i][j]))
}

/// The antisymmetric basis `E_{ji} − E_{ij}` for `i < j`, with the pair list.
fn antisymmetric_basis(n: usize) -> (Vec<IMat>, Vec<(usize, usize)>) {
    let mut basis = Vec::new();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            basis.push(imat(n, &[(j, i, 1), (i, j, -1)]));
            pairs.push((i, j));
        }
    }
    (basis, pairs)
}

/// Coordinates of an antisymmetric matrix read off its lower triangle.
fn antisymmetric_coordinates(m: &IMat, pairs: &[(usize, usize)]) -> Vec<i64> {
    pairs.iter().map(|&(i, j)| m[j][i]).collect()
}

fn assert_constants_match_brackets(n: usize) {
    let (basis, pairs) = antisymmetric_basis(n);
    let rbasis: Vec<RMat> = basis.iter().map(to_rmat).collect();
    let c = structure_constants_from_matrices(&rbasis, 0.0).unwrap();
    let d = basis.len();
    for i in 0..d {
        for j in 0..d {
            let expected = antisymmetric_coordinates(&icommutator(&basis[i], &basis[j]), &pairs);
            for k in 0..d {
                assert_eq!(c[(i * d + j) * d + k], int(expected[k]), "c^{k}_({i},{j}) in so({n})");
            }
        }
    }
}

#[test]
fn so3_constants_follow_the_cross_product() {
    assert_constants_match_brackets(3);
    let g = registry::algebra("so3").unwrap();
    // [E1,E2] = E3, [E2,E3] = E1, [E3,E1] = E2 for (ω₁, ω₂, ψ).
    assert_eq!(*g.structure_constant(0, 1, 2), int(1));
    assert_eq!(*g.structure_constant(1, 2, 0), int(1));
    assert_eq!(*g.structure_constant(2, 0, 1), int(1));
    assert_eq!(*g.structure_constant(1, 0, 2), int(-1));
}

#[test]
fn so4_constants_match_direct_brackets() {
    assert_constants_match_brackets(4);
}

#[test]
fn abelian_algebra_has_zero_constants() {
    let basis: Vec<RMat> = (0..4).map(|i| RMat::unit(4, i, i)).collect();
    let c = structure_constants_from_matrices(&basis, 0.0).unwrap();
    assert!(c.iter().all(Zero::is_zero));
}

#[test]
fn structure_constant_errors() {
    let a = RMat::unit(2, 0, 1);
    assert!(matches!(
        structure_constants_from_matrices(&[a.clone(), a.scale(&int(2))], 0.0),
        Err(Error::DependentBasis { .. })
    ));
    assert!(matches!(
        structure_constants_from_matrices(&[RMat::unit(2, 0, 1), RMat::unit(2, 1, 0)], 0.0),
        Err(Error::NotClosed { .. })
    ));
}

#[test]
fn trace_forms_on_so4_and_sl4_are_invariant() {
    for name in ["so4", "sl4"] {
        let g = registry::algebra(name).unwrap();
        assert!(check_ad_invariance(&BilinearForm::trace(&g)), "{name}");
    }
}

/// Independent search for a triple breaking `⟨[Z,X],Y⟩ + ⟨X,[Z,Y]⟩ = 0`.
fn find_violation(g: &LieAlgebra, gram: &[Vec<i64>]) -> Option<(usize, usize, usize)> {
    let n = g.dim();
    let bracket_coord = |a: usize, b: usize, k: usize| g.structure_constant(a, b, k).clone();
    for z in 0..n {
        for x in 0..n {
            for y in 0..n {
                let mut total = Rational::zero();
                for k in 0..n {
                    total += bracket_coord(z, x, k) * int(gram[k][y]);
                    total += bracket_coord(z, y, k) * int(gram[x][k]);
                }
                if !total.is_zero() {
                    return Some((z, x, y));
                }
            }
        }
    }
    None
}

#[test]
fn random_non_symmetric_form_is_rejected() {
    let g = registry::algebra("so4").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let gram: Vec<Vec<i64>> = (0..6).map(|_| (0..6).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let form = BilinearForm::from_gram(&g, RMat::from_fn(6, 6, |i, j| int(gram[i][j])), PiMultiple::one()).unwrap();
        assert!(find_violation(&g, &gram).is_some());
        assert!(!check_ad_invariance(&form));
    }
}

#[test]
fn symmetric_but_non_invariant_form_is_rejected() {
    let g = registry::algebra("so3").unwrap();
    let gram = vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]];
    assert!(find_violation(&g, &gram).is_some());
    let form = BilinearForm::from_gram(&g, RMat::from_fn(3, 3, |i, j| int(gram[i][j])), PiMultiple::one()).unwrap();
    assert!(!check_ad_invariance(&form));
}

fn so4_so3() -> OrthogonalDecomposition {
    let big = registry::algebra("so4").unwrap();
    let small = registry::algebra("so3").unwrap();
    let e = OrthogonalDecomposition::lower_right_embedding(&big, &small).unwrap();
    OrthogonalDecomposition::new(&BilinearForm::trace(&big), &small, e).unwrap()
}

fn sl4_sl3() -> &'static OrthogonalDecomposition {
    static D: OnceLock<OrthogonalDecomposition> = OnceLock::new();
    D.get_or_init(build_sl4_sl3)
}

fn build_sl4_sl3() -> OrthogonalDecomposition {
    let big = registry::algebra("sl4").unwrap();
    let small = registry::algebra("sl3").unwrap();
    let e = OrthogonalDecomposition::lower_right_embedding(&big, &small).unwrap();
    OrthogonalDecomposition::new(&BilinearForm::trace(&big), &small, e).unwrap()
}

/// Gram–Schmidt oracle: the trace-orthogonal complement of the lower-right
/// so(3) inside so(4), computed on plain integer matrices.
fn so4_perp_oracle() -> Vec<Vec<f64>> {
    let (basis, _) = antisymmetric_basis(4);
    let trace = |a: &IMat, b: &IMat| -> f64 {
        (0..4).map(|i| (0..4).map(|k| (a[i][k] * b[k][i]) as f64).sum::<f64>()).sum()
    };
    let flat = |m: &IMat| -> Vec<f64> { m.iter().flatten().map(|&x| x as f64).collect() };
    // Lower-right so(3): pairs with both indices ≥ 1.
    let sub: Vec<&IMat> = basis.iter().filter(|m| m[0].iter().all(|&x| x == 0)).collect();
    let mut perp = Vec::new();
    for b in &basis {
        let mut v = flat(b);
        for s in &sub {
            let coef = trace(b, s) / trace(s, s);
            for (vi, si) in v.iter_mut().zip(flat(s)) {
                *vi -= coef * si;
            }
        }
        if v.iter().any(|x| x.abs() > 1e-12) {
            perp.push(v);
        }
    }
    perp
}

#[test]
fn so4_perp_is_first_row_and_column() {
    let d = so4_so3();
    let oracle = so4_perp_oracle();
    assert_eq!(oracle.len(), 3);
    let g = d.ambient();
    for v in d.perp_basis() {
        let m = g.matrix_of(v);
        // Only first row / column entries may be nonzero.
        for i in 1..4 {
            for j in 1..4 {
                assert!(m[(i, j)].is_zero());
            }
        }
    }
    // Same span as the oracle: every oracle vector lies in the image of P⊥.
    for v in oracle {
        let m = RMat::from_fn(4, 4, |i, j| Rational::from_float(v[i * 4 + j]).unwrap());
        let coords = g.coordinates(&m, 0.0).unwrap();
        assert_eq!(d.project_perp(&coords), coords);
    }
    assert_eq!(d.perp_basis().len(), 3);
    assert!(d.invariant_residual().is_zero());
    assert!(d.perp_is_invariant());
}

#[test]
fn sl4_perp_has_block_structure() {
    let d = sl4_sl3();
    let g = d.ambient();
    assert_eq!(d.perp_basis().len(), 7);
    for v in d.perp_basis() {
        let m = g.matrix_of(v);
        let a = m[(0, 0)].clone();
        for i in 1..4 {
            for j in 1..4 {
                let expected = if i == j { -&a / int(3) } else { int(0) };
                assert_eq!(m[(i, j)], expected);
            }
        }
    }
    assert!(d.invariant_residual().is_zero());
    assert!(d.perp_is_invariant());
}

#[test]
fn full_subalgebra_has_zero_perp() {
    let g = registry::algebra("so3").unwrap();
    let d = OrthogonalDecomposition::new(&BilinearForm::trace(&g), &g, RMat::identity(3)).unwrap();
    assert!(d.projector_perp().as_slice().iter().all(Zero::is_zero));
    assert!(d.perp_basis().is_empty());
    assert!(d.is_symmetric_pair());
}

#[test]
fn degenerate_restriction_is_rejected() {
    // span{e12} in sl2 is a subalgebra on which tr(XY) vanishes.
    let sl2 = Arc::new(registry::sl(2).unwrap());
    let line = Arc::new(LieAlgebra::from_matrices("n", vec![RMat::unit(2, 0, 1)]).unwrap());
    let mut e = RMat::zeros(3, 1);
    e[(1, 0)] = int(1);
    assert_eq!(
        OrthogonalDecomposition::new(&BilinearForm::trace(&sl2), &line, e).unwrap_err(),
        Error::DegenerateRestriction
    );
}

#[test]
fn symmetric_pairs() {
    assert!(so4_so3().is_symmetric_pair());
    assert!(!sl4_sl3().is_symmetric_pair());
}

/// `(a, X, Z) ↦ [[a, Z], [X, −a/3·I]]` in sl(4) coordinates.
fn sl4_perp_element(a: Rational, x: [i64; 3], z: [i64; 3]) -> Vec<Rational> {
    let g = registry::algebra("sl4").unwrap();
    let m = RMat::from_fn(4, 4, |i, j| match (i, j) {
        (0, 0) => a.clone(),
        (0, j) => int(z[j - 1]),
        (i, 0) => int(x[i - 1]),
        (i, j) if i == j => -&a / int(3),
        _ => int(0),
    });
    g.coordinates(&m, 0.0).unwrap()
}

fn read_perp(v: &[Rational]) -> (Rational, [Rational; 3], [Rational; 3]) {
    let m = registry::algebra("sl4").unwrap().matrix_of(v);
    (
        m[(0, 0)].clone(),
        [m[(1, 0)].clone(), m[(2, 0)].clone(), m[(3, 0)].clone()],
        [m[(0, 1)].clone(), m[(0, 2)].clone(), m[(0, 3)].clone()],
    )
}

#[test]
fn sl4_perp_bracket_scales_x_by_minus_four_thirds() {
    let d = sl4_sl3();
    let v1 = sl4_perp_element(int(1), [0; 3], [0; 3]);
    let v2 = sl4_perp_element(int(0), [2, -1, 5], [0; 3]);
    let (_, perp) = d.perp_bracket_component(&v1, &v2);
    let (a, x, z) = read_perp(&perp);
    assert!(a.is_zero());
    assert_eq!(x, [rat(-8, 3), rat(4, 3), rat(-20, 3)]);
    assert!(z.iter().all(Zero::is_zero));
}

#[test]
fn sl4_perp_bracket_of_off_diagonal_parts() {
    let d = sl4_sl3();
    let (x1, z1) = ([1, 2, 0], [3, 0, -1]);
    let (x2, z2) = ([0, 1, 4], [2, 1, 1]);
    let v1 = sl4_perp_element(int(0), x1, z1);
    let v2 = sl4_perp_element(int(0), x2, z2);
    let (_, perp) = d.perp_bracket_component(&v1, &v2);
    let (a, x, z) = read_perp(&perp);
    let dot = |p: [i64; 3], q: [i64; 3]| p.iter().zip(q).map(|(a, b)| a * b).sum::<i64>();
    assert_eq!(a, int(dot(z1, x2) - dot(z2, x1)));
    assert!(x.iter().chain(&z).all(Zero::is_zero));
}

proptest! {
    /// g̃^⊥-part of `[(a₁,X₁,Z₁), (a₂,X₂,Z₂)]` is
    /// `(Z₁X₂ − Z₂X₁, −4/3(a₁X₂ − a₂X₁), 4/3(a₁Z₂ − a₂Z₁))`.
    #[test]
    fn sl4_perp_bracket_formula(
        a1 in -3i64..=3, a2 in -3i64..=3,
        x1 in prop::array::uniform3(-3i64..=3), z1 in prop::array::uniform3(-3i64..=3),
        x2 in prop::array::uniform3(-3i64..=3), z2 in prop::array::uniform3(-3i64..=3),
    ) {
        let d = sl4_sl3();
        let v1 = sl4_perp_element(int(a1), x1, z1);
        let v2 = sl4_perp_element(int(a2), x2, z2);
        let (_, perp) = d.perp_bracket_component(&v1, &v2);
        let (a, x, z) = read_perp(&perp);
        let dot = |p: [i64; 3], q: [i64; 3]| p.iter().zip(q).map(|(a, b)| a * b).sum::<i64>();
        prop_assert_eq!(a, int(dot(z1, x2) - dot(z2, x1)));
        for k in 0..3 {
            prop_assert_eq!(&x[k], &(rat(-4, 3) * int(a1 * x2[k] - a2 * x1[k])));
            prop_assert_eq!(&z[k], &(rat(4, 3) * int(a1 * z2[k] - a2 * z1[k])));
        }
    }

    #[test]
    fn so4_perp_self_bracket_has_no_perp_part(v in prop::array::uniform3(-5i64..=5)) {
        let d = so4_so3();
        let mut w = vec![Rational::zero(); 6];
        for (k, b) in d.perp_basis().iter().enumerate() {
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi += bi * int(v[k]);
            }
        }
        let (_, perp) = d.perp_bracket_component(&w, &w);
        prop_assert!(perp.iter().all(Zero::is_zero));
    }
}

#[test]
fn projections_are_orthogonal_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in [&so4_so3(), sl4_sl3()] {
        let n = d.ambient().dim();
        for _ in 0..100 {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            assert!(d.cross_pairing(&v, &w).abs() <= 1e-12);
        }
    }
}

#[test]
fn so3_cs_tensor_gives_one_over_eight_pi_squared() {
    let g = registry::algebra("so3").unwrap();
    let t = maurer_cartan_cs_tensor(&BilinearForm::normalized_trace(&g));
    assert!(t.is_totally_antisymmetric());
    assert_eq!(t.pi_power(), -2);
    // 16π² · CS(μ₃) = tr(...) = 2 ω₁∧ω₂∧ψ, so CS(μ₃) = ω₁∧ω₂∧ψ / (8π²).
    assert_eq!(t.form_coefficient(0, 1, 2), rat(1, 8));
    let unnormalized = maurer_cartan_cs_tensor(&BilinearForm::trace(&g));
    assert_eq!(unnormalized.form_coefficient(0, 1, 2), int(2));
}

#[test]
fn abelian_cs_tensor_vanishes() {
    let g = Arc::new(LieAlgebra::from_matrices("t2", vec![RMat::unit(2, 0, 0), RMat::unit(2, 1, 1)]).unwrap());
    let t = maurer_cartan_cs_tensor(&BilinearForm::trace(&g));
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                assert!(t.get(i, j, k).is_zero());
            }
        }
    }
}
