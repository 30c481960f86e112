use catenoid_geometry::sphere::theta;

use crate::blend::{smoothed_max, smoothed_max_grad, Blend};
use crate::{dot, japanese, FoliationError, Result};

/// Modulation curves `ell(sigma)`, `xi(sigma)` in `R^n`, parametrized by the leaf parameter `sigma`.
#[derive(Debug, Clone, PartialEq)]
pub enum Modulation {
    /// `ell` constant and `xi = xi0 + sigma ell`
    Frozen { ell: Vec<f64>, xi0: Vec<f64> },
    /// `ell = tanh(sigma / scale) amplitude` and `xi = int_0^sigma ell`
    TanhRamp { amplitude: Vec<f64>, scale: f64 },
}

/// `ln cosh x` without overflow.
fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

impl Modulation {
    pub fn dim(&self) -> usize {
        match self {
            Modulation::Frozen { ell, .. } => ell.len(),
            Modulation::TanhRamp { amplitude, .. } => amplitude.len(),
        }
    }

    pub fn ell(&self, sigma: f64) -> Vec<f64> {
        match self {
            Modulation::Frozen { ell, .. } => ell.clone(),
            Modulation::TanhRamp { amplitude, scale } => {
                let t = (sigma / scale).tanh();
                amplitude.iter().map(|a| a * t).collect()
            }
        }
    }

    pub fn ell_dot(&self, sigma: f64) -> Vec<f64> {
        match self {
            Modulation::Frozen { ell, .. } => vec![0.0; ell.len()],
            Modulation::TanhRamp { amplitude, scale } => {
                let c = (sigma / scale).cosh();
                amplitude.iter().map(|a| a / (scale * c * c)).collect()
            }
        }
    }

    pub fn xi(&self, sigma: f64) -> Vec<f64> {
        match self {
            Modulation::Frozen { ell, xi0 } => xi0.iter().zip(ell).map(|(x, l)| x + sigma * l).collect(),
            Modulation::TanhRamp { amplitude, scale } => {
                let lc = ln_cosh(sigma / scale);
                amplitude.iter().map(|a| a * scale * lc).collect()
            }
        }
    }

    /// `d xi / d sigma`; both variants have `xi' = ell`.
    pub fn xi_dot(&self, sigma: f64) -> Vec<f64> {
        self.ell(sigma)
    }

    /// The same curves with `ell` scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            Modulation::Frozen { ell, xi0 } => {
                Modulation::Frozen { ell: ell.iter().map(|v| v * factor).collect(), xi0: xi0.clone() }
            }
            Modulation::TanhRamp { amplitude, scale } => {
                Modulation::TanhRamp { amplitude: amplitude.iter().map(|v| v * factor).collect(), scale: *scale }
            }
        }
    }
}

/// Leaves `X^0 = tau + max~(gamma R_f, <r>)`, `X' = eta + r Theta`, with
/// `tau = sigma - gamma(sigma) R_f` and `eta = xi - gamma R_f ell`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoliationChart {
    pub n: usize,
    pub r_f: f64,
    pub delta1: f64,
    pub blend: Blend,
    pub curves: Modulation,
}

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX: usize = 60;

impl FoliationChart {
    pub fn new(n: usize, r_f: f64, delta1: f64, curves: Modulation) -> Result<Self> {
        if n < 2 || curves.dim() != n {
            return Err(FoliationError::Domain(format!("curves in R^{} for n = {n}", curves.dim())));
        }
        if !(r_f > 0.0) || !(delta1 > 0.0) {
            return Err(FoliationError::Domain(format!("R_f = {r_f}, delta1 = {delta1} must be positive")));
        }
        if let Modulation::TanhRamp { scale, .. } = &curves {
            if !(*scale > 0.0) {
                return Err(FoliationError::Domain(format!("ramp scale {scale} must be positive")));
            }
        }
        Ok(Self { n, r_f, delta1, blend: Blend::default(), curves })
    }

    pub fn with_blend(mut self, blend: Blend) -> Self {
        self.blend = blend;
        self
    }

    pub fn gamma(&self, sigma: f64) -> f64 {
        let l = self.curves.ell(sigma);
        1.0 / (1.0 - dot(&l, &l)).sqrt()
    }

    /// `d gamma / d sigma = gamma^3 ell . ell'`
    pub fn gamma_dot(&self, sigma: f64) -> f64 {
        let g = self.gamma(sigma);
        g * g * g * dot(&self.curves.ell(sigma), &self.curves.ell_dot(sigma))
    }

    pub fn eta(&self, sigma: f64) -> Vec<f64> {
        let g = self.gamma(sigma);
        let l = self.curves.ell(sigma);
        self.curves.xi(sigma).iter().zip(&l).map(|(x, li)| x - g * self.r_f * li).collect()
    }

    pub fn eta_dot(&self, sigma: f64) -> Vec<f64> {
        let (g, gd) = (self.gamma(sigma), self.gamma_dot(sigma));
        let (l, ld, xd) = (self.curves.ell(sigma), self.curves.ell_dot(sigma), self.curves.xi_dot(sigma));
        (0..self.n).map(|i| xd[i] - self.r_f * (gd * l[i] + g * ld[i])).collect()
    }

    pub fn tau_of_sigma(&self, sigma: f64) -> f64 {
        sigma - self.gamma(sigma) * self.r_f
    }

    pub fn dtau_dsigma(&self, sigma: f64) -> f64 {
        1.0 - self.gamma_dot(sigma) * self.r_f
    }

    /// Inverts `tau = sigma - gamma(sigma) R_f` by Newton's method.
    pub fn sigma_of_tau(&self, tau: f64) -> Result<f64> {
        let mut s = tau + self.r_f;
        newton(|s| (self.tau_of_sigma(s) - tau, self.dtau_dsigma(s)), &mut s)?;
        Ok(s)
    }

    /// `d eta / d tau` at the leaf `tau`.
    pub fn eta_prime(&self, tau: f64) -> Result<Vec<f64>> {
        let s = self.sigma_of_tau(tau)?;
        let d = self.dtau_dsigma(s);
        Ok(self.eta_dot(s).into_iter().map(|v| v / d).collect())
    }

    /// Checks `|ell| < 1/2` and `d tau / d sigma in (1/2, 3/2)` at `samples` points of `[sigma_lo, sigma_hi]`.
    pub fn validate(&self, sigma_lo: f64, sigma_hi: f64, samples: usize) -> Result<()> {
        for k in 0..samples.max(2) {
            let s = sigma_lo + (sigma_hi - sigma_lo) * k as f64 / (samples.max(2) - 1) as f64;
            let l = self.curves.ell(s);
            let speed = dot(&l, &l).sqrt();
            if !(speed < 0.5) {
                return Err(FoliationError::Domain(format!("|ell({s})| = {speed} is not below 1/2")));
            }
            let d = self.dtau_dsigma(s);
            if !(d > 0.5 && d < 1.5) {
                return Err(FoliationError::Domain(format!("d tau / d sigma = {d} at sigma = {s}")));
            }
        }
        Ok(())
    }

    /// `(X^0, X', X^{n+1})` on the leaf `tau`; `X^{n+1}` is free and set to zero.
    pub fn leaf_point(&self, tau: f64, r: f64, angles: &[f64]) -> Result<Vec<f64>> {
        self.check_angles(angles)?;
        let s = self.sigma_of_tau(tau)?;
        let x0 = tau + smoothed_max(self.gamma(s) * self.r_f, japanese(r), self.delta1, self.blend);
        let th = theta(angles);
        let mut x = Vec::with_capacity(self.n + 2);
        x.push(x0);
        x.extend(self.eta(s).iter().zip(&th).map(|(e, t)| e + r * t));
        x.push(0.0);
        Ok(x)
    }

    /// `X^0 + gamma R_f - max~(gamma R_f, <|X' - eta(sigma)|>)`; a point lies on the leaf `sigma`
    /// exactly when this map fixes `sigma`.
    pub fn leaf_map(&self, x0: f64, xp: &[f64], sigma: f64) -> f64 {
        let g = self.gamma(sigma) * self.r_f;
        let eta = self.eta(sigma);
        let d: Vec<f64> = xp.iter().zip(&eta).map(|(a, b)| a - b).collect();
        x0 + g - smoothed_max(g, japanese(dot(&d, &d).sqrt()), self.delta1, self.blend)
    }

    /// `|G(s1) - G(s2)| / |s1 - s2|` for the leaf map `G` at a fixed point.
    pub fn contraction_ratio(&self, x0: f64, xp: &[f64], s1: f64, s2: f64) -> f64 {
        (self.leaf_map(x0, xp, s1) - self.leaf_map(x0, xp, s2)).abs() / (s1 - s2).abs()
    }

    /// Leaf parameter `sigma` of the ambient point `(X^0, X')`.
    pub fn sigma_of_point(&self, x0: f64, xp: &[f64]) -> Result<f64> {
        if xp.len() != self.n {
            return Err(FoliationError::Domain(format!("X' has {} components, expected {}", xp.len(), self.n)));
        }
        let mut s = x0 + self.r_f - japanese(dot(xp, xp).sqrt()).max(self.r_f);
        newton(
            |s| {
                let g = self.gamma(s) * self.r_f;
                let eta = self.eta(s);
                let eta_dot = self.eta_dot(s);
                let d: Vec<f64> = xp.iter().zip(&eta).map(|(a, b)| a - b).collect();
                let br = japanese(dot(&d, &d).sqrt());
                let f = self.tau_of_sigma(s) + smoothed_max(g, br, self.delta1, self.blend) - x0;
                let (p1, p2) = smoothed_max_grad(g, br, self.delta1, self.blend);
                let dbr = -dot(&d, &eta_dot) / br;
                (f, self.dtau_dsigma(s) + p1 * self.gamma_dot(s) * self.r_f + p2 * dbr)
            },
            &mut s,
        )?;
        Ok(s)
    }

    /// `(tau, r, Theta)` of an ambient point; `Theta` is returned as a unit vector
    /// (undefined direction at `r = 0`).
    pub fn chart_of_point(&self, x0: f64, xp: &[f64]) -> Result<(f64, f64, Vec<f64>)> {
        let s = self.sigma_of_point(x0, xp)?;
        let eta = self.eta(s);
        let d: Vec<f64> = xp.iter().zip(&eta).map(|(a, b)| a - b).collect();
        let r = dot(&d, &d).sqrt();
        let dir = if r > 0.0 { d.iter().map(|v| v / r).collect() } else { d };
        Ok((self.tau_of_sigma(s), r, dir))
    }

    /// `<r> > gamma R_f + delta1` on the leaf `tau`.
    pub fn is_hyperboloidal(&self, tau: f64, r: f64) -> Result<bool> {
        let s = self.sigma_of_tau(tau)?;
        Ok(japanese(r) > self.gamma(s) * self.r_f + self.delta1)
    }

    pub(crate) fn check_angles(&self, angles: &[f64]) -> Result<()> {
        if angles.len() + 1 != self.n {
            return Err(FoliationError::Domain(format!("{} angles for S^{}", angles.len(), self.n - 1)));
        }
        Ok(())
    }
}

fn newton<F: FnMut(f64) -> (f64, f64)>(mut f: F, x: &mut f64) -> Result<()> {
    let mut residual = f64::INFINITY;
    for _ in 0..NEWTON_MAX {
        let (v, d) = f(*x);
        residual = v.abs();
        if !(d.abs() > 0.0) || !v.is_finite() {
            break;
        }
        let step = v / d;
        *x -= step;
        if step.abs() <= NEWTON_TOL * (1.0 + x.abs()) {
            return Ok(());
        }
    }
    Err(FoliationError::Convergence { iterations: NEWTON_MAX, residual })
}
