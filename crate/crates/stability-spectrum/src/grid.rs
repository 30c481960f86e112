use crate::{Result, SpectrumError};

/// Grid on `[-rho_max, rho_max]`, uniform in a computational variable
/// `s in [-1, 1]` with `rho = rho_max sinh(alpha s) / sinh(alpha)`
/// (`alpha = 0` is the uniform grid). Endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub rho: Vec<f64>,
    /// spacing in `s`
    pub h: f64,
    pub rho_max: f64,
    pub alpha: f64,
    /// `d rho / ds` and `d^2 rho / ds^2` at the nodes
    pub jac: Vec<f64>,
    pub jac2: Vec<f64>,
    /// `rho` and `d rho / ds` at the half nodes `i + 1/2`
    pub rho_half: Vec<f64>,
    pub jac_half: Vec<f64>,
}

/// Default stretching: the neck spacing is about 0.3 of the uniform spacing.
pub const DEFAULT_ALPHA: f64 = 3.0;

impl Grid {
    /// Checked constructor with the default stretching: neck spacing at most 0.05 and `rho_max >= 30`.
    pub fn new(rho_max: f64, nodes: usize) -> Result<Self> {
        Self::stretched(rho_max, nodes, DEFAULT_ALPHA)
    }

    /// Checked uniform grid.
    pub fn uniform(rho_max: f64, nodes: usize) -> Result<Self> {
        Self::stretched(rho_max, nodes, 0.0)
    }

    pub fn stretched(rho_max: f64, nodes: usize, alpha: f64) -> Result<Self> {
        let g = Self::unchecked(rho_max, nodes, alpha)?;
        let neck = g.neck_spacing();
        if neck > 0.05 {
            return Err(SpectrumError::Grid(format!("spacing {neck} exceeds 0.05 at the neck")));
        }
        if rho_max < 30.0 {
            return Err(SpectrumError::Grid(format!("rho_max = {rho_max} is below 30")));
        }
        Ok(g)
    }

    /// Same grid without the resolution preconditions (for convergence studies).
    pub fn unchecked(rho_max: f64, nodes: usize, alpha: f64) -> Result<Self> {
        if nodes < 8 || !(rho_max > 0.0) || !rho_max.is_finite() || !(alpha >= 0.0) {
            return Err(SpectrumError::Grid(format!("{nodes} nodes on [-{rho_max}, {rho_max}], alpha {alpha}")));
        }
        let h = 2.0 / (nodes - 1) as f64;
        let map = |s: f64| -> (f64, f64, f64) {
            if alpha == 0.0 {
                (rho_max * s, rho_max, 0.0)
            } else {
                let c = rho_max / alpha.sinh();
                let (sh, ch) = ((alpha * s).sinh(), (alpha * s).cosh());
                (c * sh, c * alpha * ch, c * alpha * alpha * sh)
            }
        };
        let mut rho = Vec::with_capacity(nodes);
        let mut jac = Vec::with_capacity(nodes);
        let mut jac2 = Vec::with_capacity(nodes);
        for i in 0..nodes {
            let s = if i + 1 == nodes { 1.0 } else { -1.0 + h * i as f64 };
            let (r, j, j2) = map(s);
            rho.push(if i == 0 { -rho_max } else if i + 1 == nodes { rho_max } else { r });
            jac.push(j);
            jac2.push(j2);
        }
        let (rho_half, jac_half) = (0..nodes - 1).map(|i| map(-1.0 + h * (i as f64 + 0.5))).map(|(r, j, _)| (r, j)).unzip();
        Ok(Self { rho, h, rho_max, alpha, jac, jac2, rho_half, jac_half })
    }

    /// Node spacing at the center of the grid.
    pub fn neck_spacing(&self) -> f64 {
        let c = self.rho.len() / 2;
        self.rho[c] - self.rho[c - 1]
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn sample<F: FnMut(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.rho.iter().copied().map(f).collect()
    }

    /// First and second `rho`-derivatives of nodal values (fourth order in `s`).
    pub fn derivatives(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = u.len();
        let mut us = vec![0.0; n];
        let mut uss = vec![0.0; n];
        numerics::fd::d1(u, self.h, &mut us);
        numerics::fd::d2(u, self.h, &mut uss);
        let d1: Vec<f64> = (0..n).map(|i| us[i] / self.jac[i]).collect();
        let d2 = (0..n).map(|i| (uss[i] - self.jac2[i] * d1[i]) / (self.jac[i] * self.jac[i])).collect();
        (d1, d2)
    }

    /// Quadrature weights in `rho` (composite Simpson in `s` times the Jacobian).
    pub fn weights(&self) -> Vec<f64> {
        numerics::quad::simpson_weights(self.len(), self.h).into_iter().zip(&self.jac).map(|(w, j)| w * j).collect()
    }
}
