use cs3_core::coframe::CoframeComplex;
use cs3_core::connections::{
    berger_lorentz_metric, levi_civita_coframe, levi_civita_coframe_ordered, round_rp3_metric, verify_connection,
    ConnectionMatrix, MetricSpec, UnknownOrder,
};
use cs3_core::linalg::RMat;
use cs3_core::scalar::{int, rat, Rational};
use cs3_core::Error;
use num_traits::Zero;
use proptest::prelude::*;

/// `[a, b, c]` as the 1-form `aω⁰ + bω¹ + cω²`.
fn lin(a: Rational, b: Rational, c: Rational) -> Vec<Rational> {
    vec![a, b, c]
}

fn zero3() -> Vec<Rational> {
    lin(int(0), int(0), int(0))
}

/// The printed Berger–Lorentz connection in the `(ξ, ρ, κ)` coframe:
/// `[[0, −(λ²+2)κ, −λρ], [(λ²+2)κ, 0, λξ], [−λρ, λξ, 0]]`.
fn printed_berger(lambda: &Rational) -> ConnectionMatrix {
    let l = lambda.clone();
    let k = &l * &l + int(2);
    let z = Rational::zero;
    ConnectionMatrix::new(
        vec![1, 1, -1],
        vec![
            vec![zero3(), lin(z(), z(), -k.clone()), lin(z(), -l.clone(), z())],
            vec![lin(z(), z(), k), zero3(), lin(l.clone(), z(), z())],
            vec![lin(z(), -l.clone(), z()), lin(l, z(), z()), zero3()],
        ],
    )
    .unwrap()
}

/// `½[[0, −ψ, ω₂], [ψ, 0, −ω₁], [−ω₂, ω₁, 0]]` in the `(ω₁, ω₂, ψ)` coframe.
fn printed_rp3() -> ConnectionMatrix {
    let h = rat(1, 2);
    let z = Rational::zero;
    ConnectionMatrix::new(
        vec![1, 1, 1],
        vec![
            vec![zero3(), lin(z(), z(), -h.clone()), lin(z(), h.clone(), z())],
            vec![lin(z(), z(), h.clone()), zero3(), lin(-h.clone(), z(), z())],
            vec![lin(z(), -h.clone(), z()), lin(h, z(), z()), zero3()],
        ],
    )
    .unwrap()
}

/// Koszul formula for a left-invariant orthonormal frame with
/// `[E_b, E_c] = f^a_{bc} E_a` and `g(E_a, E_a) = η_a`:
/// `θ^a_b(E_c) = ½ η_a (η_a f^a_{cb} − η_c f^c_{ba} + η_b f^b_{ac})`.
fn koszul_oracle(metric: &MetricSpec) -> Vec<Rational> {
    let ortho = metric.orthonormal_complex().unwrap();
    let eta = metric.eta();
    let n = eta.len();
    let f = |i: usize, j: usize, k: usize| ortho.structure_constant(i, j, k).clone();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = int(eta[a]) * f(c, b, a) - int(eta[c]) * f(b, a, c) + int(eta[b]) * f(a, c, b);
                out.push(v * int(eta[a]) * rat(1, 2));
            }
        }
    }
    out
}

/// `θ^a_b(E_c)` from a solved connection given in `ω` coordinates.
fn in_orthonormal_frame(c: &ConnectionMatrix, metric: &MetricSpec) -> Vec<Rational> {
    let n = c.size();
    let inv = metric.frame().inverse(0.0).unwrap();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for e in 0..n {
                out.push((0..n).fold(Rational::zero(), |acc, k| acc + c.coefficient(a, b, k) * &inv[(k, e)]));
            }
        }
    }
    out
}

#[test]
fn berger_lorentz_matches_printed_matrix() {
    for lambda in [int(1), int(2), int(-1), int(-3), rat(1, 2), rat(-7, 5)] {
        let metric = berger_lorentz_metric(&lambda).unwrap();
        let theta = levi_civita_coframe(&metric).unwrap();
        assert_eq!(theta, printed_berger(&lambda), "λ = {lambda}");
        assert!(verify_connection(&theta, &metric).unwrap().is_zero());
    }
}

#[test]
fn berger_at_lambda_one_has_entry_three_kappa() {
    let theta = levi_civita_coframe(&berger_lorentz_metric(&int(1)).unwrap()).unwrap();
    assert_eq!(theta.entry(0, 1), &lin(int(0), int(0), int(-3))[..]);
    let labels = CoframeComplex::su2().labels().to_vec();
    assert_eq!(theta.display(&labels).to_string(), "[0, -3κ, -ρ]\n[3κ, 0, ξ]\n[-ρ, ξ, 0]\n");
}

#[test]
fn sign_of_lambda_flips_only_the_xi_rho_entries() {
    for lambda in [int(1), int(3), rat(2, 3)] {
        let plus = levi_civita_coframe(&berger_lorentz_metric(&lambda).unwrap()).unwrap();
        let minus = levi_civita_coframe(&berger_lorentz_metric(&-lambda.clone()).unwrap()).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(plus.coefficient(a, b, 2), minus.coefficient(a, b, 2));
                for k in 0..2 {
                    assert_eq!(plus.coefficient(a, b, k), &-minus.coefficient(a, b, k).clone());
                }
            }
        }
    }
}

#[test]
fn round_rp3_matches_printed_matrix() {
    let metric = round_rp3_metric();
    let theta = levi_civita_coframe(&metric).unwrap();
    assert_eq!(theta, printed_rp3());
    assert_eq!(metric.gram(), &RMat::identity(3).scale(&rat(1, 4)));
}

#[test]
fn flat_coframe_gives_zero_connection() {
    let metric = MetricSpec::new(CoframeComplex::abelian(3).unwrap(), RMat::identity(3)).unwrap();
    let theta = levi_civita_coframe(&metric).unwrap();
    assert!((0..3).all(|a| (0..3).all(|b| theta.entry(a, b).iter().all(Zero::is_zero))));
}

#[test]
fn printed_matrices_verify() {
    let metric = berger_lorentz_metric(&int(2)).unwrap();
    let r = verify_connection(&printed_berger(&int(2)), &metric).unwrap();
    assert!(r.is_zero() && r.max_f64() == 0.0);
    assert!(verify_connection(&printed_rp3(), &round_rp3_metric()).unwrap().is_zero());
}

#[test]
fn perturbations_are_detected() {
    let metric = berger_lorentz_metric(&int(2)).unwrap();
    let theta = printed_berger(&int(2));
    for a in 0..3 {
        for b in 0..3 {
            for k in 0..3 {
                let bumped = theta.with_coefficient(a, b, k, theta.coefficient(a, b, k) + rat(1, 10));
                let r = verify_connection(&bumped, &metric).unwrap();
                assert!(r.max_f64() > 1e-12, "({a},{b},{k})");
            }
        }
    }
}

#[test]
fn gram_metrics_are_orthonormalized_by_ldl() {
    let gram = RMat::from_rows(vec![
        vec![int(1), int(1), int(0)],
        vec![int(1), int(2), int(0)],
        vec![int(0), int(0), int(-4)],
    ]);
    let metric = MetricSpec::new(CoframeComplex::su2(), gram.clone()).unwrap();
    assert_eq!(metric.signature(), (2, 1));
    let eta = RMat::from_fn(3, 3, |i, j| if i == j { int(metric.eta()[i]) } else { int(0) });
    assert_eq!(&(&metric.frame().transpose() * &eta) * metric.frame(), gram);
    let theta = levi_civita_coframe(&metric).unwrap();
    assert!(verify_connection(&theta, &metric).unwrap().is_zero());
    assert_eq!(in_orthonormal_frame(&theta, &metric), koszul_oracle(&metric));
}

#[test]
fn non_square_pivots_are_rejected() {
    let irrational = RMat::identity(3).scale(&int(2));
    assert!(matches!(
        MetricSpec::new(CoframeComplex::so3(), irrational),
        Err(Error::NotOrthonormalizable(_))
    ));
    let hyperbolic = RMat::from_rows(vec![
        vec![int(0), int(1), int(0)],
        vec![int(1), int(0), int(0)],
        vec![int(0), int(0), int(1)],
    ]);
    assert!(matches!(
        MetricSpec::new(CoframeComplex::so3(), hyperbolic),
        Err(Error::NotOrthonormalizable(_))
    ));
    assert!(berger_lorentz_metric(&int(0)).is_err());
}

#[test]
fn orderings_agree() {
    for metric in [berger_lorentz_metric(&rat(3, 2)).unwrap(), round_rp3_metric()] {
        let a = levi_civita_coframe_ordered(&metric, UnknownOrder::PairMajor).unwrap();
        let b = levi_civita_coframe_ordered(&metric, UnknownOrder::ComponentMajor).unwrap();
        assert_eq!(a, b);
    }
}

fn arb_frame() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (
        prop::collection::vec(prop_oneof![-4i64..=-1, 1i64..=4], 3),
        prop::collection::vec(prop_oneof![Just(1i64), Just(-1i64)], 3),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_matches_koszul_formula((scales, eta) in arb_frame(), lower in prop::collection::vec(-2i64..=2, 3), use_so3 in any::<bool>()) {
        let complex = if use_so3 { CoframeComplex::so3() } else { CoframeComplex::su2() };
        // Lower-unitriangular shear times a diagonal scale keeps the frame invertible.
        let frame = RMat::from_fn(3, 3, |i, j| {
            let l = match (i, j) {
                (i, j) if i == j => int(1),
                (1, 0) => int(lower[0]),
                (2, 0) => int(lower[1]),
                (2, 1) => int(lower[2]),
                _ => int(0),
            };
            l * int(scales[i])
        });
        let metric = MetricSpec::with_orthonormal_coframe(complex, frame, eta).unwrap();
        let theta = levi_civita_coframe(&metric).unwrap();
        prop_assert!(verify_connection(&theta, &metric).unwrap().is_zero());
        prop_assert_eq!(in_orthonormal_frame(&theta, &metric), koszul_oracle(&metric));
    }
}
