use catenoid_geometry::{bracket, CatenoidProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::Grid;
use crate::norms::weighted_norm;
use crate::operator::ModeOperator;
use crate::{Result, SpectrumError};

/// Largest ratios found by the random probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub delta: f64,
    pub trials: usize,
    /// `(l, max ratio)` per sector
    pub per_sector: Vec<(usize, f64)>,
    pub max_ratio: f64,
}

fn check_delta(n: usize, delta: f64) -> Result<()> {
    let (lo, hi) = (-(n as f64) / 2.0, n as f64 / 2.0 - 2.0);
    if delta > lo && delta < hi {
        Ok(())
    } else {
        Err(SpectrumError::Domain(format!("delta = {delta} outside the open interval ({lo}, {hi})")))
    }
}

/// Sum of one to three Gaussian bumps with centers in `[-8, 8]` and widths in `[0.5, 2.5]`.
pub fn random_bumps<R: Rng>(rng: &mut R, grid: &Grid) -> Vec<f64> {
    let count = rng.random_range(1..=3);
    let bumps: Vec<(f64, f64, f64)> = (0..count)
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-8.0..8.0), rng.random_range(0.5..2.5)))
        .collect();
    grid.sample(|r| bumps.iter().map(|(a, c, s)| a * (-((r - c) / s).powi(2)).exp()).sum())
}

/// `||u||_{H^{2,delta}} / (||L u||_{H^{0,delta+2}} + |<u, e>|)`, where `e` is the
/// sector's zero mode normalized in `H^{2,delta}` (only in the `l = 1` sector).
pub fn elliptic_ratio(op: &ModeOperator, u: &[f64], delta: f64, zero_mode: Option<&[f64]>) -> Result<f64> {
    check_delta(op.n, delta)?;
    let num = weighted_norm(op, u, 2, delta)?;
    let mut lu = vec![0.0; u.len()];
    lu[1..u.len() - 1].copy_from_slice(&op.apply(u));
    let mut den = weighted_norm(op, &lu, 0, delta + 2.0)?;
    if let Some(e) = zero_mode {
        let w = op.grid.weights();
        let pairing: f64 = (0..u.len()).map(|i| w[i] * op.weight[i] * u[i] * e[i]).sum();
        den += pairing.abs();
    }
    Ok(num / den)
}

/// Random-trial probe of the estimate `||u||_{H^{2,delta}} <~ ||Lu||_{H^{0,delta+2}} + sum_j |<u, e_j>|`
/// over the sectors `l = 0, 1, 2`.
pub fn elliptic_ratio_probe(
    profile: &CatenoidProfile,
    grid: &Grid,
    trials: usize,
    delta: f64,
    seed: u64,
) -> Result<ProbeReport> {
    check_delta(profile.n(), delta)?;
    if trials < 50 {
        return Err(SpectrumError::Domain(format!("at least 50 trials required, got {trials}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ops: Vec<ModeOperator> =
        (0..=2).map(|l| ModeOperator::assemble(l, profile, grid)).collect::<Result<_>>()?;
    let m = (profile.n() - 1) as i32;
    let raw = grid.sample(|r| bracket(r).powi(-m));
    let scale = weighted_norm(&ops[1], &raw, 2, delta)?;
    let e: Vec<f64> = raw.iter().map(|v| v / scale).collect();
    let mut per_sector = vec![(0, 0.0f64), (1, 0.0), (2, 0.0)];
    for _ in 0..trials {
        let u = random_bumps(&mut rng, grid);
        for (l, op) in ops.iter().enumerate() {
            let zm = (l == 1).then_some(e.as_slice());
            let ratio = elliptic_ratio(op, &u, delta, zm)?;
            per_sector[l].1 = per_sector[l].1.max(ratio);
        }
    }
    let max_ratio = per_sector.iter().fold(0.0f64, |a, s| a.max(s.1));
    Ok(ProbeReport { delta, trials, per_sector, max_ratio })
}
