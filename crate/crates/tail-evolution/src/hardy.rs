use numerics::quad::{adaptive_gk, simpson_weights};

use crate::{Result, TailError};

/// Both sides of a one-dimensional Hardy inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`
    pub ratio: f64,
    /// `lhs <= rhs` up to the quadrature tolerance
    pub pass: bool,
}

fn report(lhs: f64, rhs: f64, tol: f64) -> HardyReport {
    HardyReport { lhs, rhs, ratio: lhs / rhs, pass: lhs <= rhs + tol * (lhs.abs() + rhs.abs()) }
}

fn check_p(p: f64, center: f64) -> Result<()> {
    if p == center || !p.is_finite() {
        return Err(TailError::Domain(format!("weight {p} is degenerate (must differ from {center})")));
    }
    Ok(())
}

/// `(p-1)^2/4 int phi^2 r^{p-2} <= int phi_r^2 r^p + (p-1)/2 [r^{p-1} phi^2]_{r0}^{r1}` for samples of
/// `phi` on a uniform grid `r` (Simpson weights, fourth-order derivative).
pub fn hardy_check(r: &[f64], phi: &[f64], p: f64) -> Result<HardyReport> {
    check_p(p, 1.0)?;
    if r.len() != phi.len() || r.len() < 5 || !(r[0] > 0.0) {
        return Err(TailError::Domain("need at least five samples on a grid with r0 > 0".into()));
    }
    let h = r[1] - r[0];
    let mut d = vec![0.0; phi.len()];
    numerics::fd::d1(phi, h, &mut d);
    let w = simpson_weights(r.len(), h);
    let lhs: f64 = (0..r.len()).map(|i| w[i] * phi[i] * phi[i] * r[i].powf(p - 2.0)).sum::<f64>() * 0.25 * (p - 1.0).powi(2);
    let grad: f64 = (0..r.len()).map(|i| w[i] * d[i] * d[i] * r[i].powf(p)).sum();
    let m = r.len() - 1;
    let boundary = 0.5 * (p - 1.0) * (r[m].powf(p - 1.0) * phi[m] * phi[m] - r[0].powf(p - 1.0) * phi[0] * phi[0]);
    Ok(report(lhs, grad + boundary, 1e-8))
}

/// `int_{r0}^{r1} f dr` with `r1` possibly infinite, by adaptive Gauss-Kronrod in `log r` on
/// unit panels (so narrow features are not stepped over). On an infinite interval panels are added
/// until the geometric remainder estimated from the last two panels drops below the tolerance;
/// panels that stop shrinking mean divergence.
fn radial_integral<F: Fn(f64) -> f64>(f: F, r0: f64, r1: f64, tol: f64) -> Result<f64> {
    let panel = |lo: f64, hi: f64| adaptive_gk(|t| f(t.exp()) * t.exp(), lo, hi, tol).map(|q| q.value);
    let a = r0.ln();
    if r1.is_finite() {
        let b = r1.ln();
        let n = ((b - a).ceil() as usize).max(16);
        let h = (b - a) / n as f64;
        return Ok((0..n).map(|k| panel(a + h * k as f64, a + h * (k + 1) as f64)).sum::<numerics::Result<f64>>()?);
    }
    let mut acc = 0.0;
    let mut prev = f64::NAN;
    for k in 0..20_000 {
        let lo = a + 4.0 * k as f64;
        let v = panel(lo, lo + 4.0)?;
        if !v.is_finite() {
            return Err(TailError::Domain(format!("integrand not finite near r = {:e}", lo.exp())));
        }
        acc += v;
        let q = (v / prev).abs();
        if k >= 4 && (v == 0.0 || (q < 1.0 && v.abs() * q / (1.0 - q) <= tol * acc.abs())) {
            return Ok(acc);
        }
        if k >= 64 && !(q < 1.0) {
            break;
        }
        prev = v;
    }
    Err(TailError::Domain(format!("integral over [{r0}, inf) does not converge")))
}

fn boundary(r0: f64, r1: f64, k: f64, e: f64, phi: &dyn Fn(f64) -> f64) -> f64 {
    let hi = if r1.is_infinite() { 0.0 } else { r1.powf(e) * phi(r1).powi(2) };
    k * (hi - r0.powf(e) * phi(r0).powi(2))
}

/// [`hardy_check`] for a closed-form `phi` with derivative `dphi` on `[r0, r1]`;
/// `r1 = inf` assumes `r^{p-1} phi^2 -> 0`.
pub fn hardy_check_fn<F, G>(phi: F, dphi: G, p: f64, r0: f64, r1: f64) -> Result<HardyReport>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    check_p(p, 1.0)?;
    if !(r0 > 0.0 && r1 > r0) {
        return Err(TailError::Domain(format!("interval [{r0}, {r1}] must satisfy 0 < r0 < r1")));
    }
    let tol = 1e-11;
    let lhs = 0.25 * (p - 1.0).powi(2) * radial_integral(|r| phi(r).powi(2) * r.powf(p - 2.0), r0, r1, tol)?;
    let grad = radial_integral(|r| dphi(r).powi(2) * r.powf(p), r0, r1, tol)?;
    let rhs = grad + boundary(r0, r1, 0.5 * (p - 1.0), p - 1.0, &phi);
    Ok(report(lhs, rhs, 1e-9))
}

/// `(q-n)^2/4 int phi^2 r^{q-2} <= int (phi_r + (n-1)/(2r) phi)^2 r^q + (q-n)/2 [r^{q-1} phi^2]_{r0}^{r1}`.
pub fn hardy_variant_fn<F, G>(phi: F, dphi: G, q: f64, n: usize, r0: f64, r1: f64) -> Result<HardyReport>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let nn = n as f64;
    check_p(q, nn)?;
    if !(r0 > 0.0 && r1 > r0) {
        return Err(TailError::Domain(format!("interval [{r0}, {r1}] must satisfy 0 < r0 < r1")));
    }
    let tol = 1e-11;
    let lhs = 0.25 * (q - nn).powi(2) * radial_integral(|r| phi(r).powi(2) * r.powf(q - 2.0), r0, r1, tol)?;
    let grad = radial_integral(|r| (dphi(r) + 0.5 * (nn - 1.0) / r * phi(r)).powi(2) * r.powf(q), r0, r1, tol)?;
    let rhs = grad + boundary(r0, r1, 0.5 * (q - nn), q - 1.0, &phi);
    Ok(report(lhs, rhs, 1e-9))
}

/// Near-optimizer `r^c sin^2(pi eps log r)` on `[1, e^{1/eps}]`; the completed square is `O(eps)`.
fn log_bump(c: f64, eps: f64) -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64, f64) {
    let pi = std::f64::consts::PI;
    let phi = move |r: f64| r.powf(c) * (pi * eps * r.ln()).sin().powi(2);
    let dphi = move |r: f64| {
        let t = eps * r.ln();
        r.powf(c - 1.0) * (c * (pi * t).sin().powi(2) + eps * pi * (2.0 * pi * t).sin())
    };
    (phi, dphi, (1.0 / eps).exp())
}

/// [`hardy_check_fn`] on the near-optimizer with `c = -(p-1)/2`.
pub fn hardy_optimizer(p: f64, eps: f64) -> Result<HardyReport> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(TailError::Domain(format!("eps = {eps} outside (0, 1/2]")));
    }
    let (phi, dphi, r1) = log_bump(-(p - 1.0) / 2.0, eps);
    hardy_check_fn(phi, dphi, p, 1.0, r1)
}

/// [`hardy_variant_fn`] on the near-optimizer with `c = -(q-n)/2 - (n-1)/2`.
pub fn hardy_variant_optimizer(q: f64, n: usize, eps: f64) -> Result<HardyReport> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(TailError::Domain(format!("eps = {eps} outside (0, 1/2]")));
    }
    let nn = n as f64;
    let (phi, dphi, r1) = log_bump(-(q - nn) / 2.0 - 0.5 * (nn - 1.0), eps);
    hardy_variant_fn(phi, dphi, q, n, 1.0, r1)
}

/// Interpolation between two weighted decay rates.
///
/// From `int_R^inf r^{p-eps} f^2 <= D1 (1+tau)^{-q}` and
/// `int_R^inf r^{p+s-eps} f^2 <= D2 (1+tau)^{-q+1}`, splitting at `r = R + tau` gives
/// `int_R^inf r^p f^2 <= C max(D1, D2) (1+tau)^{-q+1-s+eps}` with `C = R^eps + 1` for `R >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationReport {
    pub d1: f64,
    pub d2: f64,
    pub constant: f64,
    /// `(tau, int r^p f^2, bound)`
    pub samples: Vec<(f64, f64, f64)>,
    /// largest `lhs / bound`
    pub worst: f64,
    pub pass: bool,
}

/// Evaluates both hypotheses (their constants are the sup over `taus`) and the conclusion.
pub fn interpolation_check<F>(
    f: F,
    taus: &[f64],
    p: f64,
    q: f64,
    s: f64,
    eps: f64,
    big_r: f64,
) -> Result<InterpolationReport>
where
    F: Fn(f64, f64) -> f64,
{
    if !(s > 0.0 && s <= 1.0) {
        return Err(TailError::Domain(format!("s = {s} outside (0, 1]")));
    }
    if !(eps > 0.0 && eps < s) {
        return Err(TailError::Domain(format!("eps = {eps} outside (0, s)")));
    }
    if !(big_r >= 1.0) || taus.is_empty() {
        return Err(TailError::Domain(format!("need R >= 1 and at least one time, got R = {big_r}")));
    }
    let tol = 1e-10;
    let moment = |tau: f64, a: f64, which: u8| -> Result<f64> {
        let v = radial_integral(|r| r.powf(a) * f(tau, r).powi(2), big_r, f64::INFINITY, tol)
            .map_err(|e| TailError::Hypothesis(which, format!("weighted integral diverges at tau = {tau}: {e}")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(TailError::Hypothesis(which, format!("weighted integral is not finite at tau = {tau}")))
        }
    };
    let mut d1 = 0.0f64;
    let mut d2 = 0.0f64;
    for &tau in taus {
        d1 = d1.max(moment(tau, p - eps, 1)? * (1.0 + tau).powf(q));
        d2 = d2.max(moment(tau, p + s - eps, 2)? * (1.0 + tau).powf(q - 1.0));
    }
    let constant = big_r.powf(eps) + 1.0;
    let mut samples = Vec::with_capacity(taus.len());
    let mut worst = 0.0f64;
    for &tau in taus {
        let lhs = moment(tau, p, 0)?;
        let bound = constant * d1.max(d2) * (1.0 + tau).powf(-q + 1.0 - s + eps);
        worst = worst.max(lhs / bound);
        samples.push((tau, lhs, bound));
    }
    Ok(InterpolationReport { d1, d2, constant, samples, worst, pass: worst <= 1.0 + 1e-8 })
}
