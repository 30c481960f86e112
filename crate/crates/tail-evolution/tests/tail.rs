use std::sync::OnceLock;

use numerics::quad::adaptive_gk;
use tail_evolution::*;

const CENTER: f64 = 15.0;
const WIDTH: f64 = 5.0;

fn dpsi0(r: f64) -> f64 {
    InitialData::bump_derivative(r, CENTER, WIDTH) * r.powf(1.5) + 1.5 * r.sqrt() * InitialData::bump_profile(r, CENTER, WIDTH)
}

fn run(initial: InitialData, source: Source, tau_max: f64, observers: Vec<f64>) -> RunOutput {
    let cfg = EvolutionConfig {
        tau_max,
        dtau: 0.03,
        initial,
        source,
        observers,
        p_list: vec![],
        ..EvolutionConfig::default()
    };
    Evolution::new(cfg).unwrap().run().unwrap()
}

fn homogeneous() -> &'static RunOutput {
    static RUN: OnceLock<RunOutput> = OnceLock::new();
    RUN.get_or_init(|| {
        run(InitialData::Bump { amp: 1.0, center: CENTER, width: WIDTH }, Source::None, 2000.0, vec![10.0, 30.0])
    })
}

fn sourced(s: f64) -> RunOutput {
    run(
        InitialData::Bump { amp: 0.0, center: CENTER, width: WIDTH },
        Source::Power { amp: 1.0, q: 2.25, s },
        4000.0,
        vec![12.0, 30.0],
    )
}

#[test]
fn oracle_has_the_cube_law_with_the_predicted_coefficient() {
    // -int r^{3/2} psi0' = (3/2) int r^{1/2} psi0 = (3/2) int r^2 bump
    let coef = 1.5
        * adaptive_gk(|r| r * r * InitialData::bump_profile(r, CENTER, WIDTH), CENTER - WIDTH, CENTER + WIDTH, 1e-13)
            .unwrap()
            .value;
    let taus = [1e5, 2e5];
    let v = free_space_oracle(dpsi0, CENTER - WIDTH, CENTER + WIDTH, 10.0, &taus).unwrap();
    for (t, u) in taus.iter().zip(&v) {
        let rel = (u * (t + 10.0).powi(3) / coef - 1.0).abs();
        assert!(rel < 1e-3, "t^3 U / coefficient off by {rel}");
    }
    assert!(free_space_oracle(dpsi0, CENTER - WIDTH, CENTER + WIDTH, 10.0, &[30.0]).is_err());
}

#[test]
fn homogeneous_tail_matches_the_free_space_oracle() {
    let out = homogeneous();
    for r in [10.0, 30.0] {
        let fit = observer_fit(out, r, 10.0, 7).unwrap();
        let taus: Vec<f64> = out.taus.iter().copied().filter(|t| *t > 45.0).step_by(20).collect();
        let oracle = free_space_oracle(dpsi0, CENTER - WIDTH, CENTER + WIDTH, r, &taus).unwrap();
        let ofit = tail_fit(&taus, &oracle, 45.0, 1.5, 7).unwrap();
        assert!(
            (fit.exponent - ofit.exponent).abs() < 0.15,
            "r = {r}: evolution {} vs oracle {}",
            fit.exponent,
            ofit.exponent
        );
        assert!(fit.r2 > 0.999 && fit.spread < 0.05);
    }
    // away from the wall the amplitude agrees as well
    let (_, series) = &out.observers[1];
    let t_end = *out.taus.last().unwrap();
    let o = free_space_oracle(dpsi0, CENTER - WIDTH, CENTER + WIDTH, 30.0, &[t_end]).unwrap()[0];
    let ratio = series.last().unwrap() / o;
    assert!((ratio - 1.0).abs() < 0.02, "amplitude ratio {ratio}");
}

#[test]
fn source_tails_order_by_radial_decay() {
    let fast = sourced(4.0);
    let slow = sourced(3.0);
    for r in [12.0, 30.0] {
        let a = observer_fit(&fast, r, 10.0, 3).unwrap();
        let b = observer_fit(&slow, r, 10.0, 3).unwrap();
        assert!(a.exponent >= 2.25 - 0.15, "r^-4 source at r = {r}: exponent {}", a.exponent);
        assert!(b.exponent >= 2.0 - 0.15, "r^-3 source at r = {r}: exponent {}", b.exponent);
        assert!(a.exponent - b.exponent >= 0.15, "gap {} - {}", a.exponent, b.exponent);
    }
}

#[test]
fn fits_refuse_short_windows_and_runs() {
    let out = homogeneous();
    let (_, series) = &out.observers[0];
    assert!(matches!(tail_fit(&out.taus, series, 500.0, 1.5, 1), Err(TailError::InsufficientDecades { .. })));
    assert!(matches!(observer_fit(out, 100.0, 10.0, 1), Err(TailError::RunTooShort { .. })));
    assert!(observer_fit(out, 11.0, 10.0, 1).is_err());
}

#[test]
fn fit_recovers_exact_power_laws() {
    let taus: Vec<f64> = (1..=20000).map(|k| k as f64 * 0.1).collect();
    for p in [2.0, 2.25, 3.0] {
        let v: Vec<f64> = taus.iter().map(|t| 5.0 * (1.0 + t * t).powf(-0.5 * p)).collect();
        let fit = tail_fit(&taus, &v, 1.0, 1.5, 11).unwrap();
        assert!((fit.exponent - p).abs() < 1e-4, "{p}: {}", fit.exponent);
        assert!(fit.r2 > 0.999_999);
    }
}
