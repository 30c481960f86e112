use catenoid_geometry::sphere::{round_metric, sphere_area, theta, theta_derivatives, SphereRule};
use catenoid_geometry::{
    asymptote_s, bracket, profile_derivative, profile_ode_residual, profile_ode_residuals, CatenoidProfile,
    GeometryError,
};
use numerics::fit::observed_order;
use numerics::quad::adaptive_gk;
use proptest::prelude::*;

// Substituting x = f^{-2(n-1)} turns S into B(1/2 - 1/(2m), 1/2) / (2m), m = n - 1.
// Gamma values at rational points, to 18 digits.
const GAMMA_1_3: f64 = 2.678_938_534_707_747_633;
const GAMMA_5_6: f64 = 1.128_787_029_908_125_968;
const GAMMA_1_4: f64 = 3.625_609_908_221_908_311;
const GAMMA_3_4: f64 = 1.225_416_702_465_177_645;
const SQRT_PI: f64 = 1.772_453_850_905_516_027;

#[test]
fn s_matches_beta_function_reduction() {
    let s4 = asymptote_s(4).unwrap();
    let beta4 = GAMMA_1_3 * SQRT_PI / GAMMA_5_6 / 6.0;
    assert!((s4.value - beta4).abs() < 1e-12, "{} vs {beta4}", s4.value);
    assert!((s4.gauss_kronrod - s4.tanh_sinh).abs() < 1e-10);

    let s3 = asymptote_s(3).unwrap();
    let beta3 = GAMMA_1_4 * SQRT_PI / GAMMA_3_4 / 4.0;
    assert!((s3.value - beta3).abs() < 1e-12);
    assert!((s3.gauss_kronrod - s3.tanh_sinh).abs() < 1e-10);
    assert!(s3.value > s4.value);
}

#[test]
fn s_rejects_n_two() {
    assert_eq!(asymptote_s(2), Err(GeometryError::Dimension(2)));
}

#[test]
fn profile_derivative_examples() {
    assert!((profile_derivative(2f64.powf(1.0 / 6.0), 4).unwrap() - 1.0).abs() < 1e-14);
    assert!((profile_derivative(2.0, 4).unwrap() - 63f64.powf(-0.5)).abs() < 1e-16);
    assert!(matches!(profile_derivative(1.0, 4), Err(GeometryError::Domain(_))));
    assert!(profile_derivative(0.5, 4).is_err());
}

#[test]
fn profile_equation_converges_at_second_order() {
    let p = CatenoidProfile::new(4).unwrap();
    let run = |n: usize| {
        let r: Vec<f64> = (0..n).map(|i| 1.5 + 8.5 * i as f64 / (n - 1) as f64).collect();
        let q: Vec<f64> = r.iter().map(|&x| p.q(x).unwrap()).collect();
        profile_ode_residual(&r, &q, 4).unwrap()
    };
    let coarse = run(200);
    let fine = run(399);
    // the three-point stencil leaves 1.313e-4 at 200 nodes (dominated by the first
    // interior node); the 1e-4 level is crossed between 220 and 240 nodes
    assert!((coarse - 1.3131e-4).abs() < 1e-7, "{coarse}");
    assert!(run(240) < 1e-4);
    let order = observed_order(coarse, fine, 398.0 / 199.0);
    assert!((order - 2.0).abs() < 0.2, "order {order}");
}

#[test]
fn profile_equation_trivial_inputs() {
    let r: Vec<f64> = (0..50).map(|i| 2.0 + 0.125 * i as f64).collect();
    let c = vec![0.7; r.len()];
    assert_eq!(profile_ode_residual(&r, &c, 4).unwrap(), 0.0);
    let res = profile_ode_residuals(&r, &r, 4).unwrap();
    for (i, v) in res.iter().enumerate() {
        let x = r[i + 1];
        assert!((v - 6.0 / x).abs() < 1e-10);
    }
    let near: Vec<f64> = (0..10).map(|i| 1.01 + 0.1 * i as f64).collect();
    assert!(matches!(profile_ode_residual(&near, &near, 4), Err(GeometryError::GridTooCoarse { .. })));
}

#[test]
fn metric_limits() {
    let p = CatenoidProfile::new(4).unwrap();
    let m = p.metric_at(0.0).unwrap();
    assert!((m.g_rr - 1.0 / 3.0).abs() < 1e-15);
    assert!((m.f_rho - 3f64.powf(-0.5)).abs() < 1e-15);
    assert!((m.ii2 - 12.0).abs() < 1e-15);
    assert_eq!(m.z, 0.0);
    assert_eq!(m.nu, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    let far = p.metric_at(1e4).unwrap();
    assert!((far.g_rr - 1.0).abs() < 1e-7);
    assert!(far.ii2 < 1e-30);
    // S - Z ~ <rho>^{-2} / 2 for n = 4
    assert!(((p.s() - far.z) * 2e8 - 1.0).abs() < 1e-6);
}

#[test]
fn z_series_and_quadrature_meet() {
    let p = CatenoidProfile::new(4).unwrap();
    // on either side of the switch the two evaluations describe the same function
    let rho_switch = 3f64.sqrt();
    let below = p.z(rho_switch * (1.0 - 1e-9)).unwrap();
    let above = p.z(rho_switch * (1.0 + 1e-9)).unwrap();
    let slope = p.z_prime(rho_switch);
    assert!((above - below - slope * 2e-9 * rho_switch).abs() < 1e-13);
}

#[test]
fn z_prime_matches_difference_quotient() {
    let p = CatenoidProfile::new(4).unwrap();
    for &rho in &[-3.0, -0.4, 0.0, 0.2, 1.7, 5.0] {
        let h = 1e-4;
        let fd = (p.z(rho + h).unwrap() - p.z(rho - h).unwrap()) / (2.0 * h);
        assert!((fd - p.z_prime(rho)).abs() < 1e-7, "rho {rho}");
    }
}

#[test]
fn integral_of_q_prime_approaches_height_deficit() {
    let p = CatenoidProfile::new(4).unwrap();
    let a = 1.05;
    let qa = p.q(a).unwrap();
    let mut prev_gap = f64::INFINITY;
    for &r in &[5.0, 20.0, 80.0] {
        let val = adaptive_gk(|x| profile_derivative(x, 4).unwrap(), a, r, 1e-14).unwrap().value;
        assert!((val - (p.q(r).unwrap() - qa)).abs() < 1e-11);
        let gap = (p.s() - qa) - val;
        assert!(gap > 0.0 && gap < prev_gap);
        prev_gap = gap;
    }
    // the remaining height is int_80^inf ~ 80^{-2} / 2
    assert!((prev_gap * 2.0 * 6400.0 - 1.0).abs() < 1e-6);
}

#[test]
fn sphere_rule_integrates_quadratics() {
    for n in 3..=5 {
        let rule = SphereRule::new(n, 16);
        let area = rule.integrate(|_, _| 1.0);
        assert!((area - sphere_area(n)).abs() < 1e-12 * area);
        for i in 0..n {
            for j in 0..n {
                let v = rule.integrate(|_, t| t[i] * t[j]);
                let expect = if i == j { area / n as f64 } else { 0.0 };
                assert!((v - expect).abs() < 1e-13 * area, "n={n} i={i} j={j}: {v}");
            }
        }
    }
    assert!((sphere_area(4) - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-13);
    assert!((sphere_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-13);
}

proptest! {
    #[test]
    fn z_is_odd_and_bounded(rho in -50.0f64..50.0) {
        let p = CatenoidProfile::new(4).unwrap();
        let z = p.z(rho).unwrap();
        prop_assert!((z + p.z(-rho).unwrap()).abs() < 1e-14);
        prop_assert!(z.abs() < p.s());
    }

    #[test]
    fn q_prime_positive_and_decreasing(r in 1.0001f64..100.0, dr in 1e-3f64..5.0) {
        let a = profile_derivative(r, 4).unwrap();
        let b = profile_derivative(r + dr, 4).unwrap();
        prop_assert!(a > 0.0 && b > 0.0 && b < a);
    }

    #[test]
    fn coefficient_formulas_agree(rho in -40.0f64..40.0) {
        let p = CatenoidProfile::new(4).unwrap();
        let g = p.g_rr(rho);
        let f = p.f_rho(rho);
        prop_assert!((g - f * f).abs() <= 1e-12 * g);
        let b = bracket(rho);
        let lhs = g * (b.powi(6) - 1.0);
        let rhs = rho * rho * b.powi(4);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300) + 1e-300);
        prop_assert!(g > 0.0);
    }

    #[test]
    fn normal_is_unit_and_orthogonal(rho in -20.0f64..20.0, a in prop::array::uniform3(0.0f64..3.14)) {
        let p = CatenoidProfile::new(4).unwrap();
        let th = theta(&a);
        let nu = p.normal(rho, &th);
        let norm: f64 = nu.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-14);
        for t in p.tangents(rho, &a) {
            let dot: f64 = t.iter().zip(&nu).map(|(x, y)| x * y).sum();
            let tn: f64 = t.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!(dot.abs() <= 1e-10 * tn.max(1.0));
        }
    }

    #[test]
    fn theta_derivatives_match_round_metric(a in prop::array::uniform3(0.1f64..3.0)) {
        let d = theta_derivatives(&a);
        let g = round_metric(&a);
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = d[i].iter().zip(&d[j]).map(|(x, y)| x * y).sum();
                let expect = if i == j { g[i] } else { 0.0 };
                prop_assert!((dot - expect).abs() < 1e-14);
            }
            let mut ap = a;
            ap[i] += 1e-6;
            let mut am = a;
            am[i] -= 1e-6;
            let (tp, tm) = (theta(&ap), theta(&am));
            for k in 0..4 {
                prop_assert!(((tp[k] - tm[k]) / 2e-6 - d[i][k]).abs() < 1e-8);
            }
        }
    }
}
