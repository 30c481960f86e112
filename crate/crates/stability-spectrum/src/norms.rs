use crate::operator::ModeOperator;
use crate::{Result, SpectrumError};

/// Squared `H^{s,delta}` norm of the mode function `u(rho) Y_l` with `Y_l`
/// normalized in `L^2(S^{n-1})`:
/// `sum_{k <= s} int <rho>^{2(delta+k)} |nabla^k (u Y)|^2 dVol`.
pub fn weighted_norm_sq(op: &ModeOperator, u: &[f64], s: usize, delta: f64) -> Result<f64> {
    let grid = &op.grid;
    if u.len() != grid.len() {
        return Err(SpectrumError::Domain(format!("{} samples on a grid of {}", u.len(), grid.len())));
    }
    if s > 2 {
        return Err(SpectrumError::Domain(format!("order s = {s} is not supported")));
    }
    let nn = op.n as f64;
    let big_l = (op.l * (op.l + op.n - 2)) as f64;
    let (du, ddu) = if s >= 1 { grid.derivatives(u) } else { (vec![0.0; u.len()], vec![0.0; u.len()]) };
    let w = grid.weights();
    let mut total = 0.0;
    for i in 0..u.len() {
        let rho = grid.rho[i];
        let b2 = 1.0 + rho * rho;
        let g = op.g_rr[i];
        let mut dens = b2.powf(delta) * u[i] * u[i];
        if s >= 1 {
            dens += b2.powf(delta + 1.0) * (du[i] * du[i] / g + big_l * u[i] * u[i] / b2);
        }
        if s >= 2 {
            let hrr = ddu[i] - op.christoffel[i] * du[i];
            let mixed = du[i] - rho / b2 * u[i];
            let kappa = rho / g;
            let angular = u[i] * u[i] * (big_l * big_l - (nn - 2.0) * big_l) - 2.0 * big_l * kappa * u[i] * du[i]
                + (nn - 1.0) * kappa * kappa * du[i] * du[i];
            let hess = hrr * hrr / (g * g) + 2.0 * big_l * mixed * mixed / (g * b2) + angular / (b2 * b2);
            dens += b2.powf(delta + 2.0) * hess;
        }
        total += w[i] * op.weight[i] * dens;
    }
    Ok(total)
}

/// `||u||_{H^{s,delta}}`.
pub fn weighted_norm(op: &ModeOperator, u: &[f64], s: usize, delta: f64) -> Result<f64> {
    Ok(weighted_norm_sq(op, u, s, delta)?.sqrt())
}
