//! Bracketing root finders.

use crate::{NumError, Result};

/// Bisection on a sign change; stops when the bracket is narrower than `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumError::NotBracketed { lo, hi, flo: fa, fhi: fb });
    }
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        if (b - a).abs() < tol {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Err(NumError::MaxIterations(max_iter))
}

/// Newton iteration with a fallback to the previous iterate's step halving.
pub fn newton<F: FnMut(f64) -> (f64, f64)>(mut f: F, x0: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let mut x = x0;
    for _ in 0..max_iter {
        let (v, d) = f(x);
        if d == 0.0 || !d.is_finite() {
            return Err(NumError::Invalid(format!("zero derivative at {x}")));
        }
        let dx = v / d;
        x -= dx;
        if dx.abs() <= tol * (1.0 + x.abs()) {
            return Ok(x);
        }
    }
    Err(NumError::MaxIterations(max_iter))
}
