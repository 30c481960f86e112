use numerics::fd::d1_d2_nonuniform;
use numerics::quad::{adaptive_gk, tanh_sinh};

use crate::sphere::{theta, theta_derivatives};
use crate::{GeometryError, Result};

/// Radius beyond which `Z` is evaluated from its asymptotic series.
const SERIES_RADIUS: f64 = 2.0;

/// `<x> = sqrt(1 + x^2)`.
pub fn bracket(x: f64) -> f64 {
    x.hypot(1.0)
}

/// `Q'(r) = (r^{2(n-1)} - 1)^{-1/2}` for `r > 1`.
pub fn profile_derivative(r_tilde: f64, n: usize) -> Result<f64> {
    check_dim(n)?;
    if !(r_tilde > 1.0) || !r_tilde.is_finite() {
        return Err(GeometryError::Domain(format!("Q' needs r > 1, got {r_tilde}")));
    }
    let m = (n - 1) as f64;
    Ok(1.0 / (2.0 * m * r_tilde.ln()).exp_m1().sqrt())
}

fn check_dim(n: usize) -> Result<()> {
    if n < 3 {
        Err(GeometryError::Dimension(n))
    } else {
        Ok(())
    }
}

/// Integrand of `S` after `f = 1 + u^2`: `2u / sqrt((1+u^2)^{2(n-1)} - 1)`.
fn u_integrand(u: f64, m: f64) -> f64 {
    if u < 1e-100 {
        return (2.0 / m).sqrt();
    }
    2.0 * u / (2.0 * m * (u * u).ln_1p()).exp_m1().sqrt()
}

/// `int_R^inf dr / sqrt(r^{2m} - 1)` for `R > 1`, summed from the binomial series.
fn tail(r: f64, m: f64) -> f64 {
    let mut c = 1.0;
    let mut sum = 0.0;
    for k in 0..400 {
        let e = m * (2 * k + 1) as f64;
        let term = c * r.powf(1.0 - e) / (e - 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        c *= (2 * k + 1) as f64 / (2 * k + 2) as f64;
    }
    sum
}

/// `S` from the two independent quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteS {
    pub value: f64,
    pub gauss_kronrod: f64,
    pub tanh_sinh: f64,
}

/// The height `S = int_1^inf df / sqrt(f^{2(n-1)} - 1)` of the catenoid's asymptotic planes.
pub fn asymptote_s(n: usize) -> Result<AsymptoteS> {
    check_dim(n)?;
    let m = (n - 1) as f64;
    // u = t / (1 - t) maps [0, 1) onto the half line
    let g = |t: f64| {
        let u = t / (1.0 - t);
        // the integrand decays like u^{3-4m}; far beyond double precision here
        if !(u < 1e60) {
            return 0.0;
        }
        u_integrand(u, m) / ((1.0 - t) * (1.0 - t))
    };
    let a = adaptive_gk(g, 0.0, 1.0, 1e-14)?.value;
    let b = tanh_sinh(g, 0.0, 1.0, 1e-14)?.value;
    if (a - b).abs() > 1e-10 {
        return Err(GeometryError::SchemesDisagree { a, b });
    }
    Ok(AsymptoteS { value: a, gauss_kronrod: a, tanh_sinh: b })
}

/// Pointwise geometric data at one value of `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSample {
    pub rho: f64,
    pub z: f64,
    pub g_rr: f64,
    pub g_sphere: f64,
    /// `|F_rho|`
    pub f_rho: f64,
    /// `|II|^2`
    pub ii2: f64,
    /// unit normal at the point with `Theta = e_1`
    pub nu: Vec<f64>,
}

/// Profile of the `n`-dimensional catenoid with its constant `S`.
#[derive(Debug, Clone)]
pub struct CatenoidProfile {
    n: usize,
    s: f64,
}

impl CatenoidProfile {
    pub fn new(n: usize) -> Result<Self> {
        let s = asymptote_s(n)?.value;
        Ok(Self { n, s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    fn m(&self) -> f64 {
        (self.n - 1) as f64
    }

    pub fn profile_derivative(&self, r_tilde: f64) -> Result<f64> {
        profile_derivative(r_tilde, self.n)
    }

    /// `Q(r) - S`, accurate also when `Q` is close to `S`.
    pub fn q_minus_s(&self, r_tilde: f64) -> Result<f64> {
        if !(r_tilde >= 1.0) || !r_tilde.is_finite() {
            return Err(GeometryError::Domain(format!("Q needs r >= 1, got {r_tilde}")));
        }
        if r_tilde > SERIES_RADIUS {
            Ok(-tail(r_tilde, self.m()))
        } else {
            Ok(self.near_neck(r_tilde - 1.0)? - self.s)
        }
    }

    /// `Q(r) = int_1^r dr' / sqrt(r'^{2(n-1)} - 1)`, the height over radius `r`.
    pub fn q(&self, r_tilde: f64) -> Result<f64> {
        if r_tilde > SERIES_RADIUS {
            Ok(self.s - tail(r_tilde, self.m()))
        } else if r_tilde >= 1.0 {
            self.near_neck(r_tilde - 1.0)
        } else {
            Err(GeometryError::Domain(format!("Q needs r >= 1, got {r_tilde}")))
        }
    }

    /// Height integral up to `r = 1 + u_max^2`, with `r - 1` passed directly.
    fn near_neck(&self, r_minus_one: f64) -> Result<f64> {
        let u_max = r_minus_one.sqrt();
        if u_max == 0.0 {
            return Ok(0.0);
        }
        let m = self.m();
        Ok(adaptive_gk(|u| u_integrand(u, m), 0.0, u_max, 1e-15)?.value)
    }

    /// `Z(rho)`, odd in `rho`, with `|Z| < S`.
    pub fn z(&self, rho: f64) -> Result<f64> {
        let b = bracket(rho);
        let mag = if b > SERIES_RADIUS {
            self.s - tail(b, self.m())
        } else {
            // <rho> - 1 without cancellation
            self.near_neck(rho * rho / (b + 1.0))?
        };
        Ok(mag.copysign(rho))
    }

    /// `Z'(rho) = rho / (<rho> sqrt(<rho>^{2(n-1)} - 1))`, with limit `(n-1)^{-1/2}` at 0.
    pub fn z_prime(&self, rho: f64) -> f64 {
        let m = self.m();
        if rho * rho < f64::MIN_POSITIVE {
            return 1.0 / m.sqrt();
        }
        rho.abs() / (bracket(rho) * (m * (rho * rho).ln_1p()).exp_m1().sqrt())
    }

    /// `rho^2 <rho>^{2(n-2)} / (<rho>^{2(n-1)} - 1)`.
    pub fn g_rr(&self, rho: f64) -> f64 {
        let m = self.m();
        let r2 = rho * rho;
        if r2 < f64::MIN_POSITIVE {
            return 1.0 / m;
        }
        r2 * (1.0 + r2).powf(m - 1.0) / (m * r2.ln_1p()).exp_m1()
    }

    /// `|F_rho| = |rho| <rho>^{n-2} / sqrt(<rho>^{2(n-1)} - 1)`.
    pub fn f_rho(&self, rho: f64) -> f64 {
        self.g_rr(rho).sqrt()
    }

    /// `|II|^2 = n(n-1) <rho>^{-2n}`.
    pub fn ii2(&self, rho: f64) -> f64 {
        let n = self.n as f64;
        n * (n - 1.0) * (1.0 + rho * rho).powf(-n)
    }

    /// Unit normal `(Theta / <rho>^{n-1}, -sign(rho) sqrt(1 - <rho>^{-2(n-1)}))`.
    pub fn normal(&self, rho: f64, theta_vec: &[f64]) -> Vec<f64> {
        let m = self.m();
        let l = 0.5 * (rho * rho).ln_1p();
        let radial = (-m * l).exp();
        let axial = -(-(-2.0 * m * l).exp_m1()).sqrt().copysign(rho);
        let mut out: Vec<f64> = theta_vec.iter().map(|t| t * radial).collect();
        out.push(if rho == 0.0 { 0.0 } else { axial });
        out
    }

    /// The embedding `F(rho, omega) = (<rho> Theta(omega), Z(rho))`.
    pub fn embedding(&self, rho: f64, angles: &[f64]) -> Result<Vec<f64>> {
        let b = bracket(rho);
        let mut out: Vec<f64> = theta(angles).into_iter().map(|t| b * t).collect();
        out.push(self.z(rho)?);
        Ok(out)
    }

    /// Coordinate tangent vectors `F_rho` followed by `F_{omega_a}`.
    pub fn tangents(&self, rho: f64, angles: &[f64]) -> Vec<Vec<f64>> {
        let b = bracket(rho);
        let mut fr: Vec<f64> = theta(angles).into_iter().map(|t| rho / b * t).collect();
        fr.push(self.z_prime(rho));
        let mut out = vec![fr];
        for d in theta_derivatives(angles) {
            let mut v: Vec<f64> = d.into_iter().map(|t| b * t).collect();
            v.push(0.0);
            out.push(v);
        }
        out
    }

    pub fn metric_at(&self, rho: f64) -> Result<MetricSample> {
        let mut e1 = vec![0.0; self.n];
        e1[0] = 1.0;
        Ok(MetricSample {
            rho,
            z: self.z(rho)?,
            g_rr: self.g_rr(rho),
            g_sphere: 1.0 + rho * rho,
            f_rho: self.f_rho(rho),
            ii2: self.ii2(rho),
            nu: self.normal(rho, &e1),
        })
    }
}

/// Pointwise residual of `Q'' + (n-1)/r Q' + (n-1)/r Q'^3` at the interior nodes,
/// from second-order centered differences of the samples `q` on the grid `r`.
pub fn profile_ode_residuals(r: &[f64], q: &[f64], n: usize) -> Result<Vec<f64>> {
    check_dim(n)?;
    if r.len() != q.len() || r.len() < 3 {
        return Err(GeometryError::Domain("need at least three matching samples".into()));
    }
    if r.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(GeometryError::Domain("grid must be strictly increasing".into()));
    }
    if !(r[0] > 1.0) {
        return Err(GeometryError::Domain(format!("grid must start above r = 1, got {}", r[0])));
    }
    let spacing = r[1] - r[0];
    if spacing > 0.5 * (r[0] - 1.0) {
        return Err(GeometryError::GridTooCoarse { first: r[0], spacing });
    }
    let (d1, d2) = d1_d2_nonuniform(r, q);
    let m = (n - 1) as f64;
    Ok((1..r.len() - 1).map(|i| d2[i] + m / r[i] * d1[i] + m / r[i] * d1[i].powi(3)).collect())
}

/// Largest absolute interior residual of the profile equation.
pub fn profile_ode_residual(r: &[f64], q: &[f64], n: usize) -> Result<f64> {
    Ok(profile_ode_residuals(r, q, n)?.into_iter().fold(0.0, |a, v| a.max(v.abs())))
}
