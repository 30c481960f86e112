//! Acceptance run: one PASS/FAIL line per criterion with pinned tolerances.
//! Exits nonzero if any criterion outside `KNOWN_DEVIATIONS` fails.

use std::time::{Duration, Instant};

use catenoid_geometry::sphere::{round_metric, theta};
use catenoid_geometry::CatenoidProfile;
use foliation_metrics::{f0_radial_sweep, metric_blocks, source_f0, FoliationChart, Modulation};
use nalgebra::DMatrix;
use numerics::fit::observed_order;
use operator_algebra::{q, verify_identity_suite, Calculus, Monomial, OpTerm, OperatorSum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stability_spectrum::{dmatrix, morse_scan, spectrum, DMatrixOptions, Grid, ModeOperator, DEFAULT_GAP_TOL};
use tail_evolution::*;

/// Criteria that cannot pass as stated; each has a ledger entry.
const KNOWN_DEVIATIONS: &[usize] = &[8];

const EXACT_RUNTIME: Duration = Duration::from_secs(1);
const MORSE_RUNTIME: Duration = Duration::from_secs(60);
const MU2_REL_CHANGE: f64 = 0.01;
const DECAY_R2: f64 = 0.99;
const SCHEME_ORDER: f64 = 2.0;
const GAP_REL_CHANGE: f64 = 0.01;
const OPTIMIZER_MIN: f64 = 0.9;
const HIERARCHY_MARGIN: f64 = 0.05;
const TAIL_ORACLE_TOL: f64 = 0.15;
const TAIL_FAST_MIN: f64 = 2.25 - 0.15;
const TAIL_SLOW_MIN: f64 = 2.0 - 0.15;
const TAIL_GAP_MIN: f64 = 0.15;
const TAIL_RUNTIME: Duration = Duration::from_secs(600);
const F0_FROZEN_ORDER: f64 = 3.5;
const F0_SLOPE: f64 = -3.0;
const F0_SLOPE_TOL: f64 = 0.2;
const METRIC_TOL: f64 = 1e-12;
const SHOOT_WIDTH_LOG2: i32 = -40;
const SMOOTH_TOL: f64 = 1e-8;
const SMOOTH_CONST_TOL: f64 = 1e-14;
const DMATRIX_STATIC_TOL: f64 = 1e-12;
const DMATRIX_BOOSTED_TOL: f64 = 0.05;

type Outcome = (bool, String);

fn t(c: (i64, i64), a: (i64, i64), d_r: u32, d_tau: u32, lap: u32) -> OpTerm {
    OpTerm::new(q(c.0, c.1), Monomial::new(q(a.0, a.1), d_r, d_tau, lap))
}

fn identity_suite() -> Outcome {
    let clock = Instant::now();
    let calc = Calculus::default();
    let checks = verify_identity_suite(&calc).unwrap();
    let all_exact = checks.iter().all(|c| c.pass && c.residual.is_zero());
    // the literal rule for the first-order V = r^-1 d_r leaves exactly +(1/2) r^{-1/2} d_r
    let k = OperatorSum::from_terms([t((1, 1), (3, 2), 1, 0, 0)]);
    let v = OperatorSum::from_terms([t((1, 1), (-1, 1), 1, 0, 0)]);
    let lhs = calc.commutator(&k, &v).unwrap();
    let rhs = calc.compose(&OperatorSum::r_pow(q(1, 2)), &v).unwrap().scale(q(-2, 1));
    let literal = &rhs - &lhs;
    let literal_ok = literal == OperatorSum::from_terms([t((1, 2), (-1, 2), 1, 0, 0)]);
    let dt = clock.elapsed();
    (
        all_exact && literal_ok && dt < EXACT_RUNTIME,
        format!(
            "{} identities with residual 0 in {:.3}s; for V = r^-1 d_r the rule holds in the exact form with an extra -1/2 r^(-1/2) d_r",
            checks.len(),
            dt.as_secs_f64()
        ),
    )
}

fn conjugation() -> Outcome {
    let clock = Instant::now();
    let calc = Calculus::default();
    let flat = OperatorSum::from_terms([
        t((-2, 1), (0, 1), 1, 1, 0),
        t((1, 1), (0, 1), 2, 0, 0),
        t((3, 1), (-1, 1), 1, 0, 0),
        t((-3, 1), (-1, 1), 0, 1, 0),
    ]);
    let conj = calc.conjugate(&flat, q(3, 2)).unwrap();
    let potential = conj.coefficient(&Monomial::new(q(-2, 1), 0, 0, 0));
    let first_tau = conj.coefficient(&Monomial::new(q(-1, 1), 0, 1, 0));
    let first_r = conj.coefficient(&Monomial::new(q(-1, 1), 1, 0, 0));
    let dt = clock.elapsed();
    (
        potential == q(-3, 4) && first_tau == q(0, 1) && first_r == q(0, 1) && dt < EXACT_RUNTIME,
        format!("potential {potential} r^-2, r^-1 d_tau coefficient {first_tau}, r^-1 d_r coefficient {first_r}"),
    )
}

fn sector(l: usize, nodes: usize, k: usize) -> stability_spectrum::SpectralResult {
    let p = CatenoidProfile::new(4).unwrap();
    spectrum(&ModeOperator::assemble(l, &p, &Grid::new(30.0, nodes).unwrap()).unwrap(), k).unwrap()
}

fn morse_index() -> Outcome {
    let clock = Instant::now();
    let p = CatenoidProfile::new(4).unwrap();
    let idx: Vec<usize> =
        [2000, 4000].iter().map(|&n| morse_scan(&p, &Grid::new(30.0, n).unwrap(), 6, DEFAULT_GAP_TOL).unwrap().morse_index).collect();
    let (a, b) = (sector(0, 2000, 1), sector(0, 4000, 1));
    let (m1, m2) = (a.mu2.unwrap(), b.mu2.unwrap());
    let change = ((m2 - m1) / m2).abs();
    let r2 = a.decay_r2.unwrap();
    let dt = clock.elapsed();
    (
        idx == [1, 1] && change < MU2_REL_CHANGE && r2 > DECAY_R2 && dt < MORSE_RUNTIME,
        format!("index {idx:?} at 2000/4000 nodes, mu^2 {m1:.6} -> {m2:.6} ({:.3}%), decay fit R^2 {r2:.5}, {:.1}s", 100.0 * change, dt.as_secs_f64()),
    )
}

fn zero_modes() -> Outcome {
    let p = CatenoidProfile::new(4).unwrap();
    let residual = |nodes| {
        let grid = Grid::new(30.0, nodes).unwrap();
        let op = ModeOperator::assemble(1, &p, &grid).unwrap();
        let u = grid.sample(|r| r.hypot(1.0).powi(-3));
        op.weighted_l2(&op.apply(&u))
    };
    // 2000 -> 3999 nodes halves the computational spacing
    let (coarse, fine) = (residual(2000), residual(3999));
    let order = observed_order(coarse, fine, 2.0);
    let g0 = |n| sector(0, n, 2).eigenvalues[0].abs();
    let g2 = |n| sector(2, n, 1).eigenvalues[0].abs();
    let (a0, b0, a2, b2) = (g0(2000), g0(3999), g2(2000), g2(3999));
    let stable = |a: f64, b: f64| a > 0.0 && b > 0.0 && ((a - b) / b).abs() < GAP_REL_CHANGE;
    (
        order >= SCHEME_ORDER - 0.5 && stable(a0, b0) && stable(a2, b2),
        format!("residual {coarse:.3e} -> {fine:.3e}, order {order:.3}; gaps l=0 {a0:.5}/{b0:.5}, l=2 {a2:.5}/{b2:.5}"),
    )
}

fn random_bumps(rng: &mut ChaCha8Rng) -> Vec<(f64, f64, f64)> {
    let k = rng.random_range(1..=3);
    (0..k)
        .map(|_| {
            let a = rng.random_range(1.5..20.0);
            (rng.random_range(-2.0..2.0), a, a + rng.random_range(1.0..9.0))
        })
        .collect()
}

fn bumps_at(parts: &[(f64, f64, f64)], x: f64, deriv: bool) -> f64 {
    parts
        .iter()
        .map(|&(c, a, b)| {
            let (m, w) = (0.5 * (a + b), 0.5 * (b - a));
            c * if deriv { InitialData::bump_derivative(x, m, w) } else { InitialData::bump_profile(x, m, w) }
        })
        .sum()
}

fn hardy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let r: Vec<f64> = (0..=6000).map(|i| 1.0 + 30.0 * i as f64 / 6000.0).collect();
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut opt_min = f64::INFINITY;
    for p in [0.0, 0.5, 1.5] {
        for _ in 0..100 {
            let parts = random_bumps(&mut rng);
            let phi: Vec<f64> = r.iter().map(|&x| bumps_at(&parts, x, false)).collect();
            let rep = hardy_check(&r, &phi, p).unwrap();
            ok &= rep.pass;
            worst = worst.max(rep.ratio);
        }
        opt_min = opt_min.min(hardy_optimizer(p, 0.02).unwrap().ratio);
    }
    let mut var_worst = 0.0f64;
    let mut var_opt = f64::INFINITY;
    for qv in [0.0, 2.0, 6.0] {
        for _ in 0..100 {
            let parts = random_bumps(&mut rng);
            let rep = hardy_variant_fn(|x| bumps_at(&parts, x, false), |x| bumps_at(&parts, x, true), qv, 4, 1.0, 31.0).unwrap();
            ok &= rep.pass;
            var_worst = var_worst.max(rep.ratio);
        }
        var_opt = var_opt.min(hardy_variant_optimizer(qv, 4, 0.02).unwrap().ratio);
    }
    (
        ok && opt_min >= OPTIMIZER_MIN && var_opt >= OPTIMIZER_MIN,
        format!("random max ratio {worst:.4} (variant {var_worst:.4}), optimizer min {opt_min:.4} (variant {var_opt:.4})"),
    )
}

fn hierarchy() -> Outcome {
    let cfg = EvolutionConfig { tau_max: 200.0, p_list: vec![0.5, 1.0, 1.4, 1.5, 1.9], observers: vec![], ..EvolutionConfig::default() };
    let evo = Evolution::new(cfg.clone()).unwrap();
    let out = evo.run().unwrap();
    let rep = hierarchy_check(&out.ledger, HIERARCHY_CONSTANT, HIERARCHY_MARGIN).unwrap();
    let y_ps: Vec<f64> = rep.windows.iter().filter(|w| w.p < Y_RANGE).map(|w| w.p).collect();
    let y_covered = [0.5, 1.0, 1.4].iter().all(|p| y_ps.contains(p));
    // intro form on every ledger slice for p across [0, 3/2]
    let probe: Vec<f64> = (0..=6).map(|k| 0.25 * k as f64).collect();
    let chi = cfg.cutoff();
    let mut state = evo.init().unwrap();
    let mut intro_min = f64::INFINITY;
    for k in 0..=evo.steps() {
        if k > 0 {
            evo.step(&mut state).unwrap();
        }
        if k % cfg.ledger_every == 0 {
            for pt in energies(&evo, &state, &probe, &chi).per_p {
                intro_min = intro_min.min(pt.ey_intro);
            }
        }
    }
    (
        rep.pass && y_covered && intro_min >= 0.0,
        format!(
            "max ratio {:.5}, Y (p < 3/2) {:.5}, bound {:.5}; min intro-form energy {intro_min:.3e}",
            rep.max_ratio,
            rep.max_ratio_y,
            HIERARCHY_CONSTANT * (1.0 + HIERARCHY_MARGIN)
        ),
    )
}

fn tails() -> Outcome {
    const CENTER: f64 = 15.0;
    const WIDTH: f64 = 5.0;
    let dpsi0 = |r: f64| {
        InitialData::bump_derivative(r, CENTER, WIDTH) * r.powf(1.5) + 1.5 * r.sqrt() * InitialData::bump_profile(r, CENTER, WIDTH)
    };
    let run = |amp: f64, source: Source, tau_max: f64, observers: Vec<f64>| {
        let clock = Instant::now();
        let cfg = EvolutionConfig {
            tau_max,
            dtau: 0.03,
            initial: InitialData::Bump { amp, center: CENTER, width: WIDTH },
            source,
            observers,
            p_list: vec![],
            ..EvolutionConfig::default()
        };
        let out = Evolution::new(cfg).unwrap().run().unwrap();
        (out, clock.elapsed())
    };
    let ((hom, t0), (fast, t1), (slow, t2)) = std::thread::scope(|s| {
        let a = s.spawn(|| run(1.0, Source::None, 2000.0, vec![10.0, 30.0]));
        let b = s.spawn(|| run(0.0, Source::Power { amp: 1.0, q: 2.25, s: 4.0 }, 4000.0, vec![12.0, 30.0]));
        let c = s.spawn(|| run(0.0, Source::Power { amp: 1.0, q: 2.25, s: 3.0 }, 4000.0, vec![12.0, 30.0]));
        (a.join().unwrap(), b.join().unwrap(), c.join().unwrap())
    });
    let mut ok = [t0, t1, t2].iter().all(|d| *d < TAIL_RUNTIME);
    let mut detail = Vec::new();
    for r in [10.0, 30.0] {
        let fit = observer_fit(&hom, r, 10.0, 7).unwrap();
        let taus: Vec<f64> = hom.taus.iter().copied().filter(|t| *t > 45.0).step_by(20).collect();
        let oracle = free_space_oracle(dpsi0, CENTER - WIDTH, CENTER + WIDTH, r, &taus).unwrap();
        let ofit = tail_fit(&taus, &oracle, 45.0, 1.5, 7).unwrap();
        ok &= (fit.exponent - ofit.exponent).abs() < TAIL_ORACLE_TOL;
        detail.push(format!("(a) r={r}: {:.3} vs oracle {:.3}", fit.exponent, ofit.exponent));
    }
    for r in [12.0, 30.0] {
        let a = observer_fit(&fast, r, 10.0, 3).unwrap().exponent;
        let b = observer_fit(&slow, r, 10.0, 3).unwrap().exponent;
        ok &= a >= TAIL_FAST_MIN && b >= TAIL_SLOW_MIN && a - b >= TAIL_GAP_MIN;
        detail.push(format!("(b/c) r={r}: r^-4 {a:.3}, r^-3 {b:.3}"));
    }
    detail.push(format!("longest run {:.1}s", t0.max(t1).max(t2).as_secs_f64()));
    (ok, detail.join("; "))
}

fn f0_decay() -> Outcome {
    let p = CatenoidProfile::new(4).unwrap();
    let angles = [1.0, 0.7, 0.4];
    let frozen = FoliationChart::new(4, 20.0, 0.5, Modulation::Frozen { ell: vec![0.1, 0.05, 0.0, -0.05], xi0: vec![1.0, 0.0, 2.0, 0.0] }).unwrap();
    let f: Vec<f64> = [2.0, 1.0, 0.5].iter().map(|&h| source_f0(&frozen, &p, 0.0, 60.0, &angles, h).unwrap()).collect();
    let order = observed_order(f[0].abs(), f[1].abs(), 2.0);
    let ramp = FoliationChart::new(4, 20.0, 0.5, Modulation::TanhRamp { amplitude: vec![0.05, 0.0, 0.0, 0.0], scale: 10.0 }).unwrap();
    let radii: Vec<f64> = (0..16).map(|i| 50.0 * 8f64.powf(i as f64 / 15.0)).collect();
    let sweep = f0_radial_sweep(&ramp, &p, -15.0, &angles, &radii, 0.5).unwrap();
    let far: Vec<f64> = (0..8).map(|k| 800.0 * 2f64.powf(k as f64 * 3.0 / 7.0)).collect();
    let asym = f0_radial_sweep(&ramp, &p, -15.0, &angles, &far, 0.5).unwrap();
    (
        order > F0_FROZEN_ORDER && (sweep.slope - F0_SLOPE).abs() <= F0_SLOPE_TOL,
        format!(
            "frozen order {order:.2}; slope on [50, 400] {:.3} (R^2 {:.3}), F0 changes sign near 3 R_f = 60; slope on [800, 6400] {:.3}",
            sweep.slope, sweep.r2, asym.slope
        ),
    )
}

fn metric() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let charts = [0.2, 0.05].map(|a| {
        FoliationChart::new(4, 20.0, 0.5, Modulation::TanhRamp { amplitude: vec![a, -0.5 * a, 0.2 * a, 0.0], scale: 10.0 }).unwrap()
    });
    let max_abs = |m: &DMatrix<f64>| m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut worst = [0.0f64; 4];
    let mut checked = 0;
    while checked < 1000 {
        let c = &charts[checked % 2];
        let (tau, r) = (rng.random_range(-40.0..40.0), rng.random_range(22.0..400.0));
        let ang = [rng.random_range(0.2..2.9), rng.random_range(0.2..2.9), rng.random_range(0.0..6.2)];
        if !c.is_hyperboloidal(tau, r).unwrap() {
            continue;
        }
        let mb = metric_blocks(c, tau, r, &ang).unwrap();
        worst[0] = worst[0].max(max_abs(&(&mb.m0 * &mb.m0_inv - DMatrix::identity(5, 5))));
        worst[1] = worst[1].max(max_abs(&(&mb.m0 * &mb.m1_tilde + &mb.m1 * &mb.m0_inv)));
        let te: f64 = theta(&ang).iter().zip(&c.eta_prime(tau).unwrap()).map(|(a, b)| a * b).sum();
        let tt = -1.0 / ((1.0 + r * r) * (1.0 - te).powi(2));
        worst[2] = worst[2].max((mb.m1_tilde[(0, 0)] - tt).abs() / tt.abs().max(1e-3));
        let det = (1.0 - te).powi(2) * r.powi(6) * round_metric(&ang).iter().product::<f64>();
        worst[3] = worst[3].max((mb.m0.determinant().abs() - det).abs() / det);
        checked += 1;
    }
    (
        worst.iter().all(|w| *w < METRIC_TOL),
        format!("1000 points: |m0 m0^-1 - I| {:.1e}, |m0 m1~ + m1 m0^-1| {:.1e}, m1~tt {:.1e}, det {:.1e}", worst[0], worst[1], worst[2], worst[3]),
    )
}

fn shooting() -> Outcome {
    let (mu, lambda0, kappa) = (1.0, 1.0, 0.1);
    let br = |t: f64| t.hypot(1.0);
    let g = move |t: f64| 1e-3 * lambda0 * br(t).powf(-2.25) * t.sin();
    let res = shoot(mu, g, lambda0, kappa, 50.0, 0.01).unwrap();
    let lam = |t: f64| lambda0 * br(t).powf(-2.25 + kappa);
    let (t_end, b_end) = *res.trajectory.last().unwrap();
    let trapped = res.trajectory.iter().all(|&(t, b)| b.abs() <= lam(t));
    (
        res.bracket_width < 2f64.powi(SHOOT_WIDTH_LOG2) * lambda0
            && trapped
            && b_end.abs() < lam(t_end)
            && res.audit_checked > 0
            && res.audit_violations == 0,
        format!(
            "b(0) = {:.12e}, width {:.2e}, |b(T)|/lambda(T) {:.2e}, inequality checked at {} band samples, {} violations",
            res.b0,
            res.bracket_width,
            b_end.abs() / lam(t_end),
            res.audit_checked,
            res.audit_violations
        ),
    )
}

fn smoothing() -> Outcome {
    let sm = Smoother::new(Kernel::standard(2000).unwrap());
    let h = |s: f64| 0.3 * s * s * s - s * s + 2.0 * s + 0.5;
    let defect = (0..=50)
        .map(|k| {
            let t = 0.1 * k as f64;
            (sm.d_s_tilde(h, t, 0.01) - (sm.s(h, t) - h(t))).abs()
        })
        .fold(0.0, f64::max);
    let constant = (0..=40).map(|k| (sm.s(|_| 1.0, 1.0 + 0.25 * k as f64) - 1.0).abs()).fold(0.0, f64::max);
    (
        defect <= SMOOTH_TOL && constant <= SMOOTH_CONST_TOL,
        format!("max |d/dt S~h - (S-I)h| {defect:.2e}, max |S1 - 1| on t >= 1 {constant:.1e}"),
    )
}

fn dmatrix_check() -> Outcome {
    let p = CatenoidProfile::new(4).unwrap();
    let ratio = |d: &DMatrix<f64>| {
        let diag = (0..4).map(|i| d[(i, i)].abs()).fold(f64::MAX, f64::min);
        let off = (0..4).flat_map(|i| (0..4).filter(move |j| *j != i).map(move |j| (i, j))).map(|ij| d[ij].abs()).fold(0.0, f64::max);
        off / diag
    };
    let r0 = ratio(&dmatrix(&p, &[0.0; 4], 20.0, DMatrixOptions::default()).unwrap());
    // a generic direction; along a coordinate axis the matrix is diagonal by symmetry
    let r1 = ratio(&dmatrix(&p, &[0.06, 0.0, 0.08, 0.0], 20.0, DMatrixOptions::default()).unwrap());
    (r0 < DMATRIX_STATIC_TOL && r1 < DMATRIX_BOOSTED_TOL, format!("off/diag {r0:.1e} at ell = 0, {r1:.2e} at ell = (0.06, 0, 0.08, 0)"))
}

fn main() {
    let criteria: [(usize, &str, fn() -> Outcome); 12] = [
        (1, "identity suite", identity_suite),
        (2, "conjugation", conjugation),
        (3, "Morse index", morse_index),
        (4, "zero modes", zero_modes),
        (5, "Hardy", hardy),
        (6, "hierarchy regression", hierarchy),
        (7, "tails", tails),
        (8, "F0 decay", f0_decay),
        (9, "metric blocks", metric),
        (10, "shooting", shooting),
        (11, "smoothing operators", smoothing),
        (12, "dmatrix", dmatrix_check),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        let clock = Instant::now();
        let (pass, detail) = check();
        let known = KNOWN_DEVIATIONS.contains(&id);
        let tag = match (pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known deviation)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:2} {tag}: {name}: {detail} [{:.1}s]", clock.elapsed().as_secs_f64());
        if !pass && !known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
