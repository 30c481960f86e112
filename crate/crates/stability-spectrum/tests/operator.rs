mod common;

use catenoid_geometry::CatenoidProfile;
use common::{br, potential};
use proptest::prelude::*;
use stability_spectrum::{spectrum, Grid, ModeOperator, SpectrumError};

fn profile() -> CatenoidProfile {
    CatenoidProfile::new(4).unwrap()
}

fn zero_residual(nodes: usize, rho_max: f64, alpha: f64) -> f64 {
    let grid = Grid::unchecked(rho_max, nodes, alpha).unwrap();
    let op = ModeOperator::assemble(1, &profile(), &grid).unwrap();
    let u = grid.sample(|r| br(r).powi(-3));
    op.weighted_l2(&op.apply(&u))
}

#[test]
fn grid_preconditions() {
    assert!(matches!(Grid::uniform(30.0, 1000), Err(SpectrumError::Grid(_))));
    assert!(matches!(Grid::new(20.0, 2000), Err(SpectrumError::Grid(_))));
    assert!(Grid::uniform(30.0, 1201).is_ok());
    let g = Grid::new(30.0, 2000).unwrap();
    assert!(g.neck_spacing() < 0.01);
    assert_eq!(g.rho[0], -30.0);
    assert_eq!(g.rho[1999], 30.0);
    assert!(g.rho.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn constant_vector_sees_only_the_potential() {
    let grid = Grid::new(30.0, 2000).unwrap();
    let op = ModeOperator::assemble(0, &profile(), &grid).unwrap();
    let out = op.apply(&vec![1.0; grid.len()]);
    for (k, v) in out.iter().enumerate() {
        let r = grid.rho[k + 1];
        assert!((v - potential(r, 0, 4)).abs() <= 1e-12 * potential(r, 0, 4).abs().max(1e-300), "rho = {r}");
    }
}

#[test]
fn assembled_pair_is_symmetric_and_mass_positive() {
    let grid = Grid::new(30.0, 2000).unwrap();
    for l in 0..4 {
        let op = ModeOperator::assemble(l, &profile(), &grid).unwrap();
        assert!(op.mass.iter().all(|m| *m > 0.0));
        // A x . y = x . A y for the tridiagonal (diag, off) pair, checked through the symmetric form
        let t = op.symmetric().unwrap();
        let x: Vec<f64> = (0..t.len()).map(|i| (i as f64 * 0.37).sin()).collect();
        let y: Vec<f64> = (0..t.len()).map(|i| (i as f64 * 0.11).cos()).collect();
        let ax = t.apply(&x);
        let ay = t.apply(&y);
        let a: f64 = ax.iter().zip(&y).map(|(p, q)| p * q).sum();
        let b: f64 = ay.iter().zip(&x).map(|(p, q)| p * q).sum();
        assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
        // and the interior action agrees with the matrix: M^{-1} A u = L u
        let u: Vec<f64> = grid.sample(|r| (-r * r / 8.0).exp());
        let lu = op.apply(&u);
        for k in 1..op.mass.len() - 1 {
            let au = op.a_off[k - 1] * u[k] + op.a_diag[k] * u[k + 1] + op.a_off[k] * u[k + 2];
            assert!((au / op.mass[k] - lu[k]).abs() <= 1e-9 * (1.0 + lu[k].abs()));
        }
    }
}

#[test]
fn discrete_operator_matches_nested_differences() {
    let grid = Grid::new(30.0, 4000).unwrap();
    let u = |r: f64| (-(r - 0.7) * (r - 0.7) / 2.0).exp();
    for l in 0..3 {
        let op = ModeOperator::assemble(l, &profile(), &grid).unwrap();
        let lu = op.apply(&grid.sample(u));
        for k in (100..3800).step_by(97) {
            let r = grid.rho[k + 1];
            let oracle = common::apply_fd(&u, r, l, 4, 1e-4);
            assert!((lu[k] - oracle).abs() < 2e-3, "l = {l}, rho = {r}: {} vs {oracle}", lu[k]);
        }
    }
}

#[test]
fn zero_mode_residual_default_grid_and_order() {
    let coarse = zero_residual(2000, 30.0, stability_spectrum::DEFAULT_ALPHA);
    let fine = zero_residual(3999, 30.0, stability_spectrum::DEFAULT_ALPHA);
    assert!(coarse < 1e-3, "residual {coarse:e}");
    let order = (coarse / fine).log2();
    assert!(order >= 1.5, "observed order {order}");
}

#[test]
fn zero_mode_residual_insensitive_to_rho_max() {
    // uniform grids with identical spacing, the second twice as long
    let short = zero_residual(4001, 30.0, 0.0);
    let long = zero_residual(8001, 60.0, 0.0);
    assert!(((long - short) / short).abs() < 1e-3, "{short:e} vs {long:e}");
}

#[test]
fn mu2_insensitive_to_rho_max() {
    let mu = |rho_max: f64, nodes: usize| {
        let grid = Grid::unchecked(rho_max, nodes, 0.0).unwrap();
        spectrum(&ModeOperator::assemble(0, &profile(), &grid).unwrap(), 1).unwrap().mu2.unwrap()
    };
    let a = mu(30.0, 2001);
    let b = mu(60.0, 4001);
    assert!(((a - b) / a).abs() < 1e-3, "{a} vs {b}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operator_is_linear(a in -3.0f64..3.0, c in -3.0f64..3.0, l in 0usize..4) {
        let grid = Grid::unchecked(30.0, 400, 3.0).unwrap();
        let op = ModeOperator::assemble(l, &profile(), &grid).unwrap();
        let u = grid.sample(|r| (-r * r).exp());
        let v = grid.sample(|r| br(r).recip());
        let mix: Vec<f64> = u.iter().zip(&v).map(|(p, q)| a * p + c * q).collect();
        let lhs = op.apply(&mix);
        let (lu, lv) = (op.apply(&u), op.apply(&v));
        for k in 0..lhs.len() {
            let rhs = a * lu[k] + c * lv[k];
            prop_assert!((lhs[k] - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn higher_sectors_are_more_negative(l in 0usize..6) {
        let grid = Grid::unchecked(30.0, 600, 3.0).unwrap();
        let top = |l: usize| {
            let t = ModeOperator::assemble(l, &profile(), &grid).unwrap().symmetric().unwrap();
            t.eigenvalue(t.len() - 1).unwrap()
        };
        prop_assert!(top(l + 1) < top(l));
    }
}
