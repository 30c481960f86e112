mod common;

use catenoid_geometry::CatenoidProfile;
use stability_spectrum::{elliptic_ratio, elliptic_ratio_probe, weighted_norm, Grid, ModeOperator, SpectrumError};

/// Largest ratio seen at delta = -1 on the default 2000-node grid (5000 trials, three seeds
/// gave 3.46 to 3.51), recorded at first run.
const ELLIPTIC_GOLDEN: f64 = 3.6;

fn setup(nodes: usize) -> (CatenoidProfile, Grid) {
    (CatenoidProfile::new(4).unwrap(), Grid::new(30.0, nodes).unwrap())
}

#[test]
fn endpoint_delta_rejected() {
    let (p, g) = setup(2000);
    for delta in [0.0, -2.0, 0.5] {
        assert!(matches!(elliptic_ratio_probe(&p, &g, 100, delta, 1), Err(SpectrumError::Domain(_))));
    }
    assert!(matches!(elliptic_ratio_probe(&p, &g, 49, -1.0, 1), Err(SpectrumError::Domain(_))));
}

#[test]
fn zero_mode_itself_has_finite_ratio() {
    let (p, g) = setup(2000);
    let op = ModeOperator::assemble(1, &p, &g).unwrap();
    let raw = g.sample(|r| common::br(r).powi(-3));
    let scale = weighted_norm(&op, &raw, 2, -1.0).unwrap();
    let e: Vec<f64> = raw.iter().map(|v| v / scale).collect();
    let ratio = elliptic_ratio(&op, &e, -1.0, Some(&e)).unwrap();
    assert!(ratio.is_finite() && ratio > 0.0, "{ratio}");
    // without the pairing the ratio is huge, since L e is only discretization error
    let bare = elliptic_ratio(&op, &e, -1.0, None).unwrap();
    assert!(bare > 50.0 * ratio, "{bare} vs {ratio}");
}

#[test]
fn hundred_trials_stay_below_golden() {
    let (p, g) = setup(2000);
    for seed in 0..20 {
        let r = elliptic_ratio_probe(&p, &g, 100, -1.0, seed).unwrap();
        assert!(r.max_ratio < ELLIPTIC_GOLDEN, "seed {seed}: {}", r.max_ratio);
        assert!(r.max_ratio > 1.0);
    }
}

#[test]
fn probe_maximum_stable_across_seeds() {
    let (p, g) = setup(2000);
    let maxima: Vec<f64> = (0..3).map(|s| elliptic_ratio_probe(&p, &g, 1000, -1.0, s).unwrap().max_ratio).collect();
    let hi = maxima.iter().cloned().fold(f64::MIN, f64::max);
    let lo = maxima.iter().cloned().fold(f64::MAX, f64::min);
    assert!((hi - lo) / hi < 0.1, "{maxima:?}");
    assert!(hi < ELLIPTIC_GOLDEN);
}

#[test]
fn probe_stable_under_refinement() {
    let (p, coarse) = setup(2000);
    let fine = Grid::new(30.0, 3999).unwrap();
    let a = elliptic_ratio_probe(&p, &coarse, 100, -1.0, 7).unwrap();
    let b = elliptic_ratio_probe(&p, &fine, 100, -1.0, 7).unwrap();
    for (x, y) in a.per_sector.iter().zip(&b.per_sector) {
        assert!(((x.1 - y.1) / y.1).abs() < 0.01, "{x:?} vs {y:?}");
    }
}
