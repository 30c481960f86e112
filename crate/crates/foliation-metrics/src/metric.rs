use catenoid_geometry::sphere::{round_metric, theta, theta_derivatives};
use nalgebra::DMatrix;

use crate::chart::FoliationChart;
use crate::{dot, japanese, FoliationError, Result};

/// Minkowski metric in the hyperboloidal chart `(tau, r, theta^1, ..., theta^{n-1})`,
/// split as `m = m0 + m1` with `m1 = O(<r>^{-2})`.
#[derive(Debug, Clone)]
pub struct MetricBlocks {
    pub m0: DMatrix<f64>,
    pub m0_inv: DMatrix<f64>,
    pub m1: DMatrix<f64>,
    /// `-m0^{-1} m1 m0^{-1}`, the first-order correction to `m^{-1}`
    pub m1_tilde: DMatrix<f64>,
    /// `(1 - Theta . eta') r^{n-1} sqrt(det g_round)`
    pub sqrt_det_m0: f64,
    /// `sqrt|det m|` of the full metric
    pub sqrt_det_m: f64,
    pub theta_dot_eta: f64,
}

impl MetricBlocks {
    pub fn m(&self) -> DMatrix<f64> {
        &self.m0 + &self.m1
    }
}

/// Metric blocks at `(tau, r, angles)`; requires `<r> > gamma R_f + delta1` and `|Theta . eta'| < 1/2`.
pub fn metric_blocks(chart: &FoliationChart, tau: f64, r: f64, angles: &[f64]) -> Result<MetricBlocks> {
    chart.check_angles(angles)?;
    if !chart.is_hyperboloidal(tau, r)? {
        return Err(FoliationError::Regime(format!("tau = {tau}, r = {r}")));
    }
    let n = chart.n;
    let ep = chart.eta_prime(tau)?;
    let th = theta(angles);
    let dth = theta_derivatives(angles);
    let ghat = round_metric(angles);
    let te = dot(&th, &ep);
    if !(te.abs() < 0.5) {
        return Err(FoliationError::Regime(format!("|Theta . eta'| = {} is not below 1/2", te.abs())));
    }
    let br = japanese(r);
    // 1 - r/<r> = 1/(<r>(<r> + r))
    let one_minus = 1.0 / (br * (br + r));
    let d = n + 1;
    let ta: Vec<f64> = dth.iter().map(|t| dot(t, &ep)).collect();

    let mut m0 = DMatrix::zeros(d, d);
    m0[(0, 0)] = -(1.0 - dot(&ep, &ep));
    m0[(0, 1)] = -(1.0 - te);
    m0[(1, 0)] = -(1.0 - te);
    for a in 0..n - 1 {
        m0[(0, a + 2)] = r * ta[a];
        m0[(a + 2, 0)] = r * ta[a];
        m0[(a + 2, a + 2)] = r * r * ghat[a];
    }
    let mut m1 = DMatrix::zeros(d, d);
    m1[(0, 1)] = one_minus;
    m1[(1, 0)] = one_minus;
    m1[(1, 1)] = 1.0 / (br * br);

    let c = 1.0 / (1.0 - te);
    let mut m0_inv = DMatrix::zeros(d, d);
    m0_inv[(0, 1)] = -c;
    m0_inv[(1, 0)] = -c;
    m0_inv[(1, 1)] = (1.0 + te) * c;
    for a in 0..n - 1 {
        let up = ta[a] / ghat[a] * c / r;
        m0_inv[(1, a + 2)] = up;
        m0_inv[(a + 2, 1)] = up;
        m0_inv[(a + 2, a + 2)] = 1.0 / (r * r * ghat[a]);
    }
    let m1_tilde = -(&m0_inv * &m1 * &m0_inv);
    let sqrt_g: f64 = ghat.iter().product::<f64>().sqrt();
    let sqrt_det_m0 = (1.0 - te) * r.powi(n as i32 - 1) * sqrt_g;
    let sqrt_det_m = (&m0 + &m1).determinant().abs().sqrt();
    Ok(MetricBlocks { m0, m0_inv, m1, m1_tilde, sqrt_det_m0, sqrt_det_m, theta_dot_eta: te })
}

/// `|m0|^{-1/2} d_mu (|m0|^{1/2} m0^{mu nu} d_nu U)` by nested fourth-order central differences
/// of step `h` in `(tau, r, angles)`.
pub fn box_m0<F>(chart: &FoliationChart, point: &[f64], u: F, h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let d = chart.n + 1;
    if point.len() != d {
        return Err(FoliationError::Domain(format!("point has {} coordinates, expected {d}", point.len())));
    }
    let shifted = |p: &[f64], k: usize, s: f64| -> Vec<f64> {
        let mut q = p.to_vec();
        q[k] += s;
        q
    };
    let diff = |g: &dyn Fn(&[f64]) -> Result<f64>, p: &[f64], k: usize| -> Result<f64> {
        let v = [g(&shifted(p, k, -2.0 * h))?, g(&shifted(p, k, -h))?, g(&shifted(p, k, h))?, g(&shifted(p, k, 2.0 * h))?];
        Ok((v[0] - 8.0 * v[1] + 8.0 * v[2] - v[3]) / (12.0 * h))
    };
    let flux = |p: &[f64], mu: usize| -> Result<f64> {
        let mb = metric_blocks(chart, p[0], p[1], &p[2..])?;
        let uf = |q: &[f64]| -> Result<f64> { Ok(u(q)) };
        let mut acc = 0.0;
        for nu in 0..d {
            let coef = mb.m0_inv[(mu, nu)];
            if coef != 0.0 {
                acc += coef * diff(&uf, p, nu)?;
            }
        }
        Ok(mb.sqrt_det_m0 * acc)
    };
    let mut div = 0.0;
    for mu in 0..d {
        div += diff(&|p: &[f64]| flux(p, mu), point, mu)?;
    }
    Ok(div / metric_blocks(chart, point[0], point[1], &point[2..])?.sqrt_det_m0)
}
