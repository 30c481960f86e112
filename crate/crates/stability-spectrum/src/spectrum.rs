use catenoid_geometry::CatenoidProfile;
use numerics::fit::line_fit;

use crate::grid::Grid;
use crate::operator::ModeOperator;
use crate::{Result, SpectrumError};

/// Top of the spectrum of one sector operator.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub l: usize,
    /// eigenvalues of `L_l`, ascending; these are the `k` largest
    pub eigenvalues: Vec<f64>,
    /// eigenvectors on the full grid (zero at the ends), normalized in the `w`-weighted L^2
    pub eigenvectors: Vec<Vec<f64>>,
    /// the positive eigenvalue when the sector has one
    pub mu2: Option<f64>,
    /// exponential decay fit of the top eigenvector on `[5, rho_max/2]`
    pub decay_rate: Option<f64>,
    pub decay_r2: Option<f64>,
}

/// The `k` largest eigenvalues of `L_l` (ascending) with eigenvectors.
pub fn spectrum(op: &ModeOperator, k: usize) -> Result<SpectralResult> {
    let t = op.symmetric()?;
    let m = t.len();
    if k == 0 || k > m {
        return Err(SpectrumError::Domain(format!("requested {k} eigenpairs of {m}")));
    }
    let mut eigenvalues = Vec::with_capacity(k);
    let mut eigenvectors = Vec::with_capacity(k);
    for idx in (m - k)..m {
        let lam = t.eigenvalue(idx)?;
        let y = t.eigenvector(lam)?;
        // back to the nodal unknowns x = M^{-1/2} y; unit symmetric norm is unit w-norm
        let mut x = vec![0.0; m + 2];
        for (j, yj) in y.iter().enumerate() {
            x[j + 1] = yj / op.mass[j].sqrt();
        }
        // fix the sign by the value at the neck
        let mid = (m + 2) / 2;
        if x[mid] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        eigenvalues.push(lam);
        eigenvectors.push(x);
    }
    let top = *eigenvalues.last().expect("k >= 1");
    let mu2 = (op.l == 0 && top > 0.0).then_some(top);
    let (decay_rate, decay_r2) = match decay_fit(&op.grid, eigenvectors.last().expect("k >= 1")) {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    Ok(SpectralResult { l: op.l, eigenvalues, eigenvectors, mu2, decay_rate, decay_r2 })
}

fn decay_fit(grid: &Grid, v: &[f64]) -> Option<(f64, f64)> {
    let hi = 0.5 * grid.rho_max;
    let (xs, ys): (Vec<f64>, Vec<f64>) = grid
        .rho
        .iter()
        .zip(v)
        .filter(|(r, x)| **r >= 5.0 && **r <= hi && x.abs() > 0.0)
        .map(|(r, x)| (*r, x.abs().ln()))
        .unzip();
    let f = line_fit(&xs, &ys)?;
    Some((-f.slope, f.r2))
}

/// Default threshold for counting an eigenvalue as positive. It sits above the
/// discretization error of the `l = 1` zero modes (about 3e-5 at 2000 nodes)
/// and far below the distance 0.0165 from zero to the next eigenvalue.
pub const DEFAULT_GAP_TOL: f64 = 1e-3;

/// Positive-eigenvalue count in every sector `l <= l_max`.
#[derive(Debug, Clone)]
pub struct MorseScan {
    /// `(l, largest eigenvalue of L_l, count above gap_tol)`
    pub sectors: Vec<(usize, f64, usize)>,
    pub morse_index: usize,
}

/// Counts eigenvalues above `gap_tol`, each sector weighted by the
/// multiplicity `dim H_l` of the spherical harmonics of degree `l` on `S^{n-1}`.
pub fn morse_scan(profile: &CatenoidProfile, grid: &Grid, l_max: usize, gap_tol: f64) -> Result<MorseScan> {
    let mut sectors = Vec::with_capacity(l_max + 1);
    let mut index = 0;
    for l in 0..=l_max {
        let op = ModeOperator::assemble(l, profile, grid)?;
        let t = op.symmetric()?;
        let m = t.len();
        let top = t.eigenvalue(m - 1)?;
        let above = m - t.count_below(gap_tol);
        index += above * harmonic_multiplicity(profile.n(), l);
        sectors.push((l, top, above));
    }
    Ok(MorseScan { sectors, morse_index: index })
}

/// Dimension of the degree-`l` spherical harmonics on `S^{n-1}`.
pub fn harmonic_multiplicity(n: usize, l: usize) -> usize {
    let binom = |a: usize, b: usize| -> usize {
        if b > a {
            return 0;
        }
        (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1))
    };
    binom(l + n - 1, n - 1) - if l >= 2 { binom(l + n - 3, n - 1) } else { 0 }
}
