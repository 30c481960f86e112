use numerics::fd::{d1, d2};
use numerics::fit::{line_fit, observed_order};
use numerics::quad::{adaptive_gk, simpson_weights, tanh_sinh, PowerRule};
use numerics::root::bisect;
use proptest::prelude::*;

fn beta(a: f64, b: f64) -> f64 {
    // B(a+1, b+1): split at 1/2 so each half is singular only at the origin,
    // where tanh-sinh abscissae carry full relative precision
    let left = tanh_sinh(|x| x.powf(a) * (1.0 - x).powf(b), 0.0, 0.5, 1e-14).unwrap().value;
    let right = tanh_sinh(|y| y.powf(b) * (1.0 - y).powf(a), 0.0, 0.5, 1e-14).unwrap().value;
    left + right
}

#[test]
fn two_quadratures_agree_on_endpoint_singularity() {
    let f = |x: f64| 1.0 / x.sqrt();
    let ts = tanh_sinh(f, 0.0, 1.0, 1e-13).unwrap();
    assert!((ts.value - 2.0).abs() < 1e-12);
    let gk = adaptive_gk(|x| (-x * x).exp(), -3.0, 3.0, 1e-14).unwrap();
    let exact = std::f64::consts::PI.sqrt() * 0.999_977_909_503_001_4;
    assert!((gk.value - exact).abs() < 1e-12);
}

#[test]
fn beta_from_power_rule_matches_tanh_sinh() {
    for &(a, b) in &[(-0.5, 0.0), (0.0, -0.9), (-0.5, 0.5), (0.3, -0.4)] {
        let n = 401;
        let h = 1.0 / (n - 1) as f64;
        let rule = PowerRule::new(n, h, a, b);
        let total = rule.total(&vec![1.0; n]);
        let exact = beta(a, b);
        assert!((total - exact).abs() < 1e-9, "a={a} b={b}: {total} vs {exact}");
    }
}

#[test]
fn power_rule_is_exact_for_cubics_and_converges() {
    // ∫_0^1 x^{-1/2} (1 + 2x - x^3) dx = 2 + 4/3 - 2/7
    let exact = 2.0 + 4.0 / 3.0 - 2.0 / 7.0;
    let n = 17;
    let h = 1.0 / (n - 1) as f64;
    let rule = PowerRule::new(n, h, -0.5, 0.0);
    let g: Vec<f64> = (0..n).map(|i| {
        let x = i as f64 * h;
        1.0 + 2.0 * x - x * x * x
    }).collect();
    assert!((rule.total(&g) - exact).abs() < 1e-13);
    // cumulative integral at an interior node
    let cum = rule.cumulative(&g);
    let x = 8.0 * h;
    let part = 2.0 * x.sqrt() + 4.0 / 3.0 * x.powf(1.5) - 2.0 / 7.0 * x.powf(3.5);
    assert!((cum[8] - part).abs() < 1e-13);

    // smooth non-polynomial g: fourth order
    let err = |n: usize| {
        let h = 1.0 / (n - 1) as f64;
        let rule = PowerRule::new(n, h, -0.5, 0.0);
        let g: Vec<f64> = (0..n).map(|i| (i as f64 * h).cos()).collect();
        let exact = tanh_sinh(|x| x.cos() / x.sqrt(), 0.0, 1.0, 1e-15).unwrap().value;
        (rule.total(&g) - exact).abs()
    };
    let p = observed_order(err(41), err(81), 2.0);
    assert!(p > 3.5, "order {p}");
}

#[test]
fn stencils_have_fourth_order() {
    let err = |n: usize| {
        let h = 2.0 / (n - 1) as f64;
        let x: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        d1(&f, h, &mut a);
        d2(&f, h, &mut b);
        let e1 = x.iter().zip(&a).map(|(v, d)| (d - v.cos()).abs()).fold(0.0, f64::max);
        let e2 = x.iter().zip(&b).map(|(v, d)| (d + v.sin()).abs()).fold(0.0, f64::max);
        (e1, e2)
    };
    let (a1, a2) = err(41);
    let (b1, b2) = err(81);
    assert!(observed_order(a1, b1, 2.0) > 3.7);
    assert!(observed_order(a2, b2, 2.0) > 3.5);
}

#[test]
fn bisection_finds_sqrt_two() {
    let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
    assert!((r - 2f64.sqrt()).abs() < 1e-13);
    assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-14, 200).is_err());
}

proptest! {
    #[test]
    fn simpson_exact_on_cubics(c in prop::array::uniform4(-3.0f64..3.0), n in 4usize..40) {
        let h = 1.5 / (n - 1) as f64;
        let w = simpson_weights(n, h);
        let f = |x: f64| c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x;
        let s: f64 = w.iter().enumerate().map(|(i, wi)| wi * f(i as f64 * h)).sum();
        let l: f64 = 1.5;
        let exact = c[0] * l + c[1] * l * l / 2.0 + c[2] * l.powi(3) / 3.0 + c[3] * l.powi(4) / 4.0;
        prop_assert!((s - exact).abs() < 1e-11);
    }

    #[test]
    fn line_fit_recovers_lines(a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let f = line_fit(&x, &y).unwrap();
        prop_assert!((f.slope - a).abs() < 1e-10 && (f.intercept - b).abs() < 1e-10);
    }
}
