use crate::{Result, SpectrumError};

/// Partial sums of the decaying solution `sum_m C_m r^{-m}` of `L_l u = 0` for `r > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroModeSeries {
    pub value: f64,
    /// magnitude of the last term added
    pub tail: f64,
    pub terms_used: usize,
    pub partial_sums: Vec<f64>,
    pub coefficients: Vec<(usize, f64)>,
}

/// `C_{j+2(n-1)} / C_j = (j-n+1)(j+n) / ((m-l-n+2)(m+l))` with `m = j + 2(n-1)`.
pub fn recursion_ratio(j: usize, l: usize, n: usize) -> f64 {
    let (j, l, n) = (j as f64, l as f64, n as f64);
    let m = j + 2.0 * (n - 1.0);
    (j - n + 1.0) * (j + n) / ((m - l - n + 2.0) * (m + l))
}

/// Sums the series from `C_{n-2+l} = 1` until a term drops below `1e-12`
/// in magnitude, within a budget of `terms` nonzero terms.
pub fn zero_mode_series(l: usize, n: usize, r: f64, terms: usize) -> Result<ZeroModeSeries> {
    if n < 3 || l < 1 {
        return Err(SpectrumError::Domain(format!("series needs n >= 3 and l >= 1, got n = {n}, l = {l}")));
    }
    if !(r > 1.0) {
        return Err(SpectrumError::Domain(format!("series needs r > 1, got {r}")));
    }
    let step = 2 * (n - 1);
    let mut j = n - 2 + l;
    let mut c = 1.0;
    let mut sum = 0.0;
    let mut partial_sums = Vec::new();
    let mut coefficients = Vec::new();
    let mut tail = f64::INFINITY;
    for _ in 0..terms {
        let term = c * r.powi(-(j as i32));
        sum += term;
        partial_sums.push(sum);
        coefficients.push((j, c));
        tail = term.abs();
        let ratio = recursion_ratio(j, l, n);
        if ratio == 0.0 {
            tail = 0.0;
            break;
        }
        if tail < 1e-12 {
            break;
        }
        c *= ratio;
        j += step;
    }
    if tail >= 1e-12 {
        return Err(SpectrumError::Budget { terms, tail });
    }
    Ok(ZeroModeSeries { value: sum, tail, terms_used: partial_sums.len(), partial_sums, coefficients })
}
