use catenoid_geometry::CatenoidProfile;
use numerics::fit::loglog_slope;
use rayon::prelude::*;

use crate::boost::boost_spatial;
use crate::chart::FoliationChart;
use crate::{dot, FoliationError, Result};

/// `Q_wp(X) - S = Q(|y'|) - S` with `y' = A_ell (X' - xi + sigma ell) - gamma ell X^0`,
/// all parameters taken on the leaf `sigma(X)` through `X`.
pub fn q_wp(chart: &FoliationChart, profile: &CatenoidProfile, x0: f64, xp: &[f64]) -> Result<f64> {
    let s = chart.sigma_of_point(x0, xp)?;
    let ell = chart.curves.ell(s);
    let xi = chart.curves.xi(s);
    let a = boost_spatial(&ell)?;
    let gamma = chart.gamma(s);
    let shifted: Vec<f64> = (0..chart.n).map(|i| xp[i] - xi[i] + s * ell[i]).collect();
    let mut y2 = 0.0;
    for i in 0..chart.n {
        let mut yi = -gamma * ell[i] * x0;
        for (j, v) in shifted.iter().enumerate() {
            yi += a[(i, j)] * v;
        }
        y2 += yi * yi;
    }
    Ok(profile.q_minus_s(y2.sqrt())?)
}

const D1: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
const D2: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];

/// `F0 = Box_m Q - (1 + dQ.dQ)^{-1} dQ^mu dQ^nu d_mu d_nu Q` at the ambient point `(X^0, X')`,
/// from fourth-order central differences of step `h` in Cartesian coordinates.
/// Every stencil point must lie in the hyperboloidal region.
pub fn source_f0_at(chart: &FoliationChart, profile: &CatenoidProfile, x: &[f64], h: f64) -> Result<f64> {
    let d = chart.n + 1;
    if x.len() < d || profile.n() != chart.n {
        return Err(FoliationError::Domain(format!("point of length {} or profile n = {} for n = {}", x.len(), profile.n(), chart.n)));
    }
    if !(h > 0.0) {
        return Err(FoliationError::Domain(format!("step {h} must be positive")));
    }
    let eval = |offsets: &[(usize, f64)]| -> Result<f64> {
        let mut p = x[..d].to_vec();
        for &(k, v) in offsets {
            p[k] += v * h;
        }
        let (tau, r, _) = chart.chart_of_point(p[0], &p[1..])?;
        if !chart.is_hyperboloidal(tau, r)? {
            return Err(FoliationError::Regime(format!("stencil point at tau = {tau}, r = {r}")));
        }
        q_wp(chart, profile, p[0], &p[1..])
    };
    let centre = eval(&[])?;
    let mut grad = vec![0.0; d];
    let mut hess = vec![vec![0.0; d]; d];
    for i in 0..d {
        let line: Vec<f64> = (0..5)
            .map(|k| if k == 2 { Ok(centre) } else { eval(&[(i, k as f64 - 2.0)]) })
            .collect::<Result<_>>()?;
        grad[i] = (0..5).map(|k| D1[k] * line[k]).sum::<f64>() / h;
        hess[i][i] = (0..5).map(|k| D2[k] * line[k]).sum::<f64>() / (h * h);
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut acc = 0.0;
            for a in 0..5 {
                for b in 0..5 {
                    let w = D1[a] * D1[b];
                    if w != 0.0 {
                        acc += w * eval(&[(i, a as f64 - 2.0), (j, b as f64 - 2.0)])?;
                    }
                }
            }
            hess[i][j] = acc / (h * h);
            hess[j][i] = hess[i][j];
        }
    }
    // raise indices with diag(-1, 1, ..., 1)
    let up: Vec<f64> = (0..d).map(|i| if i == 0 { -grad[i] } else { grad[i] }).collect();
    let boxq = -hess[0][0] + (1..d).map(|i| hess[i][i]).sum::<f64>();
    let norm = dot(&up, &grad);
    let mut quad = 0.0;
    for i in 0..d {
        for j in 0..d {
            quad += up[i] * up[j] * hess[i][j];
        }
    }
    Ok(boxq - quad / (1.0 + norm))
}

/// [`source_f0_at`] at the chart point `(tau, r, angles)`.
pub fn source_f0(chart: &FoliationChart, profile: &CatenoidProfile, tau: f64, r: f64, angles: &[f64], h: f64) -> Result<f64> {
    let x = chart.leaf_point(tau, r, angles)?;
    source_f0_at(chart, profile, &x, h)
}

/// `F0` along a radial ray with a power-law fit of `|F0|` against `r`.
#[derive(Debug, Clone)]
pub struct F0Sweep {
    pub tau: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub r2: f64,
}

pub fn f0_radial_sweep(
    chart: &FoliationChart,
    profile: &CatenoidProfile,
    tau: f64,
    angles: &[f64],
    radii: &[f64],
    h: f64,
) -> Result<F0Sweep> {
    let values: Vec<f64> =
        radii.par_iter().map(|&r| source_f0(chart, profile, tau, r, angles, h)).collect::<Result<_>>()?;
    let mags: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    if mags.iter().any(|m| !(*m > 0.0)) {
        return Err(FoliationError::Domain("F0 vanishes on the ray; no power law to fit".into()));
    }
    let fit = loglog_slope(radii, &mags)
        .ok_or_else(|| FoliationError::Domain("need at least two distinct radii".into()))?;
    Ok(F0Sweep { tau, radii: radii.to_vec(), values, slope: fit.slope, r2: fit.r2 })
}

