// Independent closed forms used as oracles; shared by the test files through `mod common`.
#![allow(dead_code)]

pub fn br(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// `|F_rho| = rho <rho>^{n-2} / sqrt(<rho>^{2(n-1)} - 1)`, with its limit `1/sqrt(n-1)` at the neck.
pub fn f_rho(rho: f64, n: usize) -> f64 {
    let m = (n - 1) as f64;
    let x = rho * rho;
    if x < 1e-300 {
        return 1.0 / m.sqrt();
    }
    let den = (m * x.ln_1p()).exp_m1();
    (x * (1.0 + x).powf(m - 1.0) / den).sqrt()
}

pub fn weight(rho: f64, n: usize) -> f64 {
    br(rho).powi(n as i32 - 1) * f_rho(rho, n)
}

pub fn flux(rho: f64, n: usize) -> f64 {
    br(rho).powi(n as i32 - 1) / f_rho(rho, n)
}

pub fn potential(rho: f64, l: usize, n: usize) -> f64 {
    let b2 = 1.0 + rho * rho;
    -((l * (l + n - 2)) as f64) / b2 + (n * (n - 1)) as f64 * b2.powi(-(n as i32))
}

/// `L_l u` at `rho` from nested central differences of step `e` on the flux form.
pub fn apply_fd<F: Fn(f64) -> f64>(u: &F, rho: f64, l: usize, n: usize, e: f64) -> f64 {
    let du = |x: f64| (u(x + e) - u(x - e)) / (2.0 * e);
    let outer = (flux(rho + e, n) * du(rho + e) - flux(rho - e, n) * du(rho - e)) / (2.0 * e);
    outer / weight(rho, n) + potential(rho, l, n) * u(rho)
}
