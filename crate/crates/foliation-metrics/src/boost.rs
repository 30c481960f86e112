use nalgebra::DMatrix;

use crate::{dot, FoliationError, Result};

/// `diag(-1, 1, ..., 1)` of size `dim`.
pub fn minkowski(dim: usize) -> DMatrix<f64> {
    let mut m = DMatrix::identity(dim, dim);
    m[(0, 0)] = -1.0;
    m
}

/// `A_ell = gamma P_ell + P_ell^perp` on `R^{ell.len()}`.
pub fn boost_spatial(ell: &[f64]) -> Result<DMatrix<f64>> {
    let n = ell.len();
    let s2 = dot(ell, ell);
    if !(s2 < 1.0) {
        return Err(FoliationError::Speed(s2.sqrt()));
    }
    let gamma = 1.0 / (1.0 - s2).sqrt();
    let mut a = DMatrix::identity(n, n);
    if s2 > 0.0 {
        // (gamma - 1)/|ell|^2 written without cancellation
        let c = gamma * gamma / (1.0 + gamma);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] += c * ell[i] * ell[j];
            }
        }
    }
    Ok(a)
}

/// The boost `Lambda_ell` on `R^{1+(n+1)}`, coordinates `(X^0, X', X^{n+1})`, for `ell in R^n`:
/// `[[gamma, -gamma ell^T], [-gamma ell, A_ell]]` with `X^{n+1}` untouched.
pub fn boost(ell: &[f64]) -> Result<DMatrix<f64>> {
    let n = ell.len();
    let a = boost_spatial(ell)?;
    let gamma = 1.0 / (1.0 - dot(ell, ell)).sqrt();
    let mut l = DMatrix::identity(n + 2, n + 2);
    l[(0, 0)] = gamma;
    for i in 0..n {
        l[(0, i + 1)] = -gamma * ell[i];
        l[(i + 1, 0)] = -gamma * ell[i];
        for j in 0..n {
            l[(i + 1, j + 1)] = a[(i, j)];
        }
    }
    Ok(l)
}
