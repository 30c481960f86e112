use std::f64::consts::PI;

use catenoid_geometry::sphere::theta;
use catenoid_geometry::CatenoidProfile;
use nalgebra::DMatrix;
use numerics::quad::GaussLegendre;

use crate::{Result, SpectrumError};

/// Resolution of the product rule used by [`dmatrix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DMatrixOptions {
    /// Gauss-Legendre panels per radial piece (three pieces split at `|rho| = R_f/4`)
    pub radial_panels: usize,
    pub radial_points: usize,
    /// Gauss-Legendre points per polar angle; the azimuth gets twice as many
    pub angular_points: usize,
    /// relative agreement required between this rule and one with two fewer polar points
    pub tol: f64,
}

impl Default for DMatrixOptions {
    fn default() -> Self {
        Self { radial_panels: 4, radial_points: 12, angular_points: 12, tol: 1e-8 }
    }
}

/// Cutoff equal to one on `|rho| <= R_f/4`, zero beyond `R_f/2`, quintic smoothstep in between.
fn cutoff(rho: f64, r_f: f64) -> f64 {
    let t = (rho.abs() - 0.25 * r_f) / (0.25 * r_f);
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

/// `d_ij = int chi nu^i nu^j sqrt|h| h^{00} drho domega` with the flat-region metric
/// `h_{mu nu} = eta(Psi_mu, Psi_nu)`, `Psi_0 = (1, ell)`,
/// `Psi_j = (0, gamma^{-1} P_ell d_j F + P_ell^perp d_j F)`.
pub fn dmatrix(profile: &CatenoidProfile, ell: &[f64], r_f: f64, opts: DMatrixOptions) -> Result<DMatrix<f64>> {
    let n = profile.n();
    if ell.len() != n {
        return Err(SpectrumError::Domain(format!("ell has {} components, expected {n}", ell.len())));
    }
    let speed = ell.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(speed < 0.3) {
        return Err(SpectrumError::Domain(format!("|ell| = {speed} is not below 0.3")));
    }
    if !(r_f >= 10.0) {
        return Err(SpectrumError::Domain(format!("R_f = {r_f} is below 10")));
    }
    let fine = integrate(profile, ell, r_f, opts, opts.angular_points);
    let coarse = integrate(profile, ell, r_f, opts, opts.angular_points.saturating_sub(2).max(2));
    let scale = fine.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let diff = (&fine - &coarse).iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if diff > opts.tol * scale {
        return Err(SpectrumError::Numerics(numerics::NumError::QuadratureTolerance {
            tol: opts.tol,
            estimate: scale,
            error: diff / scale,
        }));
    }
    Ok(fine)
}

fn integrate(profile: &CatenoidProfile, ell: &[f64], r_f: f64, opts: DMatrixOptions, m: usize) -> DMatrix<f64> {
    let n = profile.n();
    let speed2: f64 = ell.iter().map(|v| v * v).sum();
    let gamma = 1.0 / (1.0 - speed2).sqrt();
    let dir: Vec<f64> = if speed2 > 0.0 { ell.iter().map(|v| v / speed2.sqrt()).collect() } else { vec![0.0; n] };

    let gl_r = GaussLegendre::new(opts.radial_points);
    let q = 0.25 * r_f;
    let mut radial = Vec::new();
    for (a, b) in [(-2.0 * q, -q), (-q, q), (q, 2.0 * q)] {
        let step = (b - a) / opts.radial_panels as f64;
        for p in 0..opts.radial_panels {
            let lo = a + step * p as f64;
            radial.extend(gl_r.mapped(lo, lo + step));
        }
    }
    let polar = GaussLegendre::new(m).mapped(0.0, PI);
    let naz = 2 * m;
    let mut angles: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
    for a in 0..n - 1 {
        let mut next = Vec::new();
        for (ang, w) in &angles {
            if a + 1 == n - 1 {
                for k in 0..naz {
                    let mut v = ang.clone();
                    v.push(2.0 * PI * (k as f64 + 0.5) / naz as f64);
                    next.push((v, w * 2.0 * PI / naz as f64));
                }
            } else {
                for &(t, wt) in &polar {
                    let mut v = ang.clone();
                    v.push(t);
                    next.push((v, w * wt));
                }
            }
        }
        angles = next;
    }

    let mut d = DMatrix::<f64>::zeros(n, n);
    let mut h = DMatrix::<f64>::zeros(n + 1, n + 1);
    for &(rho, wr) in &radial {
        let chi = cutoff(rho, r_f);
        if chi == 0.0 {
            continue;
        }
        for (ang, wa) in &angles {
            let th = theta(ang);
            let nu = profile.normal(rho, &th);
            // spatial parts of Psi_j, boosted along ell
            let tangents: Vec<Vec<f64>> = profile
                .tangents(rho, ang)
                .into_iter()
                .map(|t| {
                    let par: f64 = t.iter().zip(&dir).map(|(a, b)| a * b).sum();
                    let mut v = t.clone();
                    for (k, dk) in dir.iter().enumerate() {
                        v[k] += (1.0 / gamma - 1.0) * par * dk;
                    }
                    v
                })
                .collect();
            h[(0, 0)] = -1.0 + speed2;
            for (j, tj) in tangents.iter().enumerate() {
                let h0j: f64 = ell.iter().zip(tj).map(|(a, b)| a * b).sum();
                h[(0, j + 1)] = h0j;
                h[(j + 1, 0)] = h0j;
                for (k, tk) in tangents.iter().enumerate().skip(j) {
                    let v: f64 = tj.iter().zip(tk).map(|(a, b)| a * b).sum();
                    h[(j + 1, k + 1)] = v;
                    h[(k + 1, j + 1)] = v;
                }
            }
            let det = h.determinant();
            let inv = match h.clone().try_inverse() {
                Some(inv) => inv,
                None => continue,
            };
            let f = chi * (-det).sqrt() * inv[(0, 0)] * wr * wa;
            for i in 0..n {
                for j in 0..n {
                    d[(i, j)] += f * nu[i] * nu[j];
                }
            }
        }
    }
    d
}
