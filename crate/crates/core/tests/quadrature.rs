use std::f64::consts::PI;

use cs3_core::poly::standard::{so3_inclusion, su2_coframe};
use cs3_core::poly::{PolyForm, Polynomial};
use cs3_core::quadrature::{
    grid_refinement_estimate, integrate_threeform, Chart, QuadratureRule, ThreeFormIntegrand, DEFAULT_LEVELS,
    DEFAULT_NODES,
};
use cs3_core::scalar::int;
use cs3_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn xi_rho_kappa() -> PolyForm {
    let [xi, rho, kappa] = su2_coframe();
    xi.wedge(&rho).unwrap().wedge(&kappa).unwrap()
}

fn omega_omega_psi() -> PolyForm {
    let theta = so3_inclusion().mc_pullback();
    theta.get(1, 0).wedge(theta.get(2, 0)).unwrap().wedge(theta.get(2, 1)).unwrap()
}

fn integrate(form: &PolyForm, chart: &Chart, nodes: usize) -> f64 {
    let rule = QuadratureRule::new(chart, nodes).unwrap();
    integrate_threeform(&form.compile(), chart, &rule).unwrap()
}

fn random_parameters(chart: &Chart, rng: &mut ChaCha8Rng) -> [f64; 3] {
    chart.parameter_box().map(|(a, b)| rng.gen_range(a..b))
}

#[test]
fn charts_land_on_their_manifolds() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for chart in [Chart::s3(), Chart::so3()] {
        for _ in 0..1000 {
            let x = chart.embed(random_parameters(&chart, &mut rng));
            assert!(chart.manifold_residual(&x) <= 1e-12, "{} {x:?}", chart.name());
        }
    }
}

#[test]
fn analytic_tangents_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-6;
    for chart in [Chart::s3(), Chart::so3()] {
        for _ in 0..50 {
            let t = random_parameters(&chart, &mut rng);
            let (_, tangents) = chart.embed_with_tangents(t);
            for (axis, tangent) in tangents.iter().enumerate() {
                let (mut tp, mut tm) = (t, t);
                tp[axis] += h;
                tm[axis] -= h;
                let (xp, xm) = (chart.embed(tp), chart.embed(tm));
                for k in 0..chart.ambient_dim() {
                    let fd = (xp[k] - xm[k]) / (2.0 * h);
                    assert!((fd - tangent[k]).abs() < 1e-8, "{} axis {axis}", chart.name());
                }
            }
        }
    }
}

#[test]
fn sphere_volume_form_integrates_to_two_pi_squared() {
    let value = integrate(&xi_rho_kappa(), &Chart::s3(), DEFAULT_NODES);
    let exact = 2.0 * PI * PI;
    assert!(((value - exact) / exact).abs() <= 1e-8, "{value}");
}

#[test]
fn rotation_group_volume_form_integrates_to_eight_pi_squared() {
    let value = integrate(&omega_omega_psi(), &Chart::so3(), DEFAULT_NODES);
    let exact = 8.0 * PI * PI;
    assert!(((value - exact) / exact).abs() <= 1e-8, "{value}");
    assert_eq!(Chart::so3().volume().to_f64(), exact);
}

#[test]
fn riemannian_volume_of_sphere() {
    // The unoriented volume density |det[x, u, v, w]| of the embedded sphere.
    let density = (4usize, |x: &[f64], u: &[f64], v: &[f64], w: &[f64]| {
        let m = [x, u, v, w];
        Ok(det4(&m).abs())
    });
    let chart = Chart::s3().with_orientation(1);
    let rule = QuadratureRule::new(&chart, DEFAULT_NODES).unwrap();
    let value = integrate_threeform(&density, &chart, &rule).unwrap();
    assert!((value - 2.0 * PI * PI).abs() < 1e-8);
}

fn det4(m: &[&[f64]; 4]) -> f64 {
    let mut a: Vec<Vec<f64>> = m.iter().map(|r| r.to_vec()).collect();
    let mut det = 1.0;
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..4 {
            let f = a[r][c] / a[c][c];
            for k in c..4 {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

#[test]
fn sphere_orientation_is_inward() {
    // At the chart point (π/2, π/2, π/2), x = e₄ and the outward frame
    // (x, ∂χ, ∂θ, ∂φ) has positive determinant; the chart's orientation
    // reverses it.
    let chart = Chart::s3();
    let (x, [a, b, c]) = chart.embed_with_tangents([PI / 2.0, PI / 2.0, PI / 2.0]);
    assert!(det4(&[&x, &a, &b, &c]) > 0.0);
    assert_eq!(chart.orientation_sign, -1);
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize) -> Polynomial {
    (0..3).fold(Polynomial::zero(nvars), |acc, _| {
        let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=2)).collect();
        &acc + &Polynomial::monomial(nvars, e, int(rng.gen_range(-3..=3)))
    })
}

#[test]
fn exact_forms_integrate_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (chart, nvars) in [(Chart::s3(), 4), (Chart::so3(), 9)] {
        for _ in 0..3 {
            let mut beta = PolyForm::zero(nvars, 2).unwrap();
            for _ in 0..4 {
                let i = rng.gen_range(0..nvars);
                let j = (i + rng.gen_range(1..nvars)) % nvars;
                beta.add_indexed(&[i, j], random_poly(&mut rng, nvars)).unwrap();
            }
            let value = integrate(&beta.d(), &chart, DEFAULT_NODES);
            assert!(value.abs() <= 1e-8, "{} {value}", chart.name());
        }
    }
}

#[test]
fn refinement_of_volume_form() {
    let r = grid_refinement_estimate(&xi_rho_kappa().compile(), &Chart::s3(), &DEFAULT_LEVELS).unwrap();
    assert!((r.value - 2.0 * PI * PI).abs() <= 1e-8);
    assert!(r.error_estimate <= 1e-8);
    assert_eq!(r.levels.len(), 3);
}

#[test]
fn refinement_error_decays_spectrally() {
    let weight = &Polynomial::var(4, 0).pow(20) * &Polynomial::var(4, 3).pow(2);
    let form = xi_rho_kappa().mul_function(&weight).compile();
    let chart = Chart::s3();
    let r = grid_refinement_estimate(&form, &chart, &DEFAULT_LEVELS).unwrap();
    let d1 = (r.levels[1].1 - r.levels[0].1).abs();
    let d2 = (r.levels[2].1 - r.levels[1].1).abs();
    assert!(d1 > 1e-6, "coarse level should be inexact: {d1}");
    assert!(d2 <= d1 / 10.0, "{d1} {d2}");
}

#[test]
fn refinement_of_zero_is_zero() {
    let zero = PolyForm::zero(4, 3).unwrap().compile();
    let r = grid_refinement_estimate(&zero, &Chart::s3(), &DEFAULT_LEVELS).unwrap();
    assert_eq!((r.value, r.error_estimate), (0.0, 0.0));
}

#[test]
fn coarsening_ladder_is_non_convergent() {
    let weight = Polynomial::var(4, 0).pow(40);
    let form = xi_rho_kappa().mul_function(&weight).compile();
    let err = grid_refinement_estimate(&form, &Chart::s3(), &[16, 16, 4]).unwrap_err();
    assert!(matches!(err, Error::NonConvergent { .. }));
    assert!(matches!(
        grid_refinement_estimate(&form, &Chart::s3(), &[16]),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn integrand_errors_propagate() {
    let failing = (4usize, |_: &[f64], _: &[f64], _: &[f64], _: &[f64]| -> cs3_core::Result<f64> {
        Err(Error::Evaluation("boom".into()))
    });
    let chart = Chart::s3();
    let rule = QuadratureRule::new(&chart, 4).unwrap();
    assert!(matches!(integrate_threeform(&failing, &chart, &rule), Err(Error::Evaluation(_))));
    let nan = (4usize, |_: &[f64], _: &[f64], _: &[f64], _: &[f64]| Ok(f64::NAN));
    assert!(matches!(integrate_threeform(&nan, &chart, &rule), Err(Error::Evaluation(_))));
    let wrong_dim = (9usize, |_: &[f64], _: &[f64], _: &[f64], _: &[f64]| Ok(1.0));
    assert!(integrate_threeform(&wrong_dim, &chart, &rule).is_err());
    let two_form = PolyForm::dx(4, 0).wedge(&PolyForm::dx(4, 1)).unwrap().compile();
    assert!(integrate_threeform(&two_form, &chart, &rule).is_err());
}

#[test]
fn integration_is_deterministic() {
    let form = xi_rho_kappa().mul_function(&Polynomial::var(4, 2).pow(3)).compile();
    let chart = Chart::s3();
    let rule = QuadratureRule::new(&chart, 20).unwrap();
    let a = integrate_threeform(&form, &chart, &rule).unwrap();
    let b = integrate_threeform(&form, &chart, &rule).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
    assert_eq!(ThreeFormIntegrand::ambient_dim(&form), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn integration_is_linear(seed in any::<u64>(), a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = xi_rho_kappa().mul_function(&random_poly(&mut rng, 4));
        let g = xi_rho_kappa().mul_function(&random_poly(&mut rng, 4));
        let chart = Chart::s3();
        let rule = QuadratureRule::new(&chart, 12).unwrap();
        let (cf, cg) = (f.compile(), g.compile());
        let combined = (4usize, |x: &[f64], u: &[f64], v: &[f64], w: &[f64]| {
            Ok(a * cf.evaluate(x, &[u, v, w]) + b * cg.evaluate(x, &[u, v, w]))
        });
        let lhs = integrate_threeform(&combined, &chart, &rule).unwrap();
        let rhs = a * integrate_threeform(&cf, &chart, &rule).unwrap() + b * integrate_threeform(&cg, &chart, &rule).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }
}
