use catenoid_geometry::{bracket, CatenoidProfile};
use numerics::tridiag::SymTridiag;

use crate::grid::Grid;
use crate::Result;

/// Flux-form discretization (in the grid's computational variable `s`) of the sector operator
/// `L_l = (w)^{-1} d(w~ d) - l(l+n-2)<rho>^{-2} + n(n-1)<rho>^{-2n}`
/// with `w = <rho>^{n-1}|F_rho|`, `w~ = <rho>^{n-1}/|F_rho|` and homogeneous
/// Dirichlet data at both ends. The unknowns are the interior nodes.
#[derive(Debug, Clone)]
pub struct ModeOperator {
    pub l: usize,
    pub n: usize,
    pub grid: Grid,
    /// volume density `w` at the nodes
    pub weight: Vec<f64>,
    /// flux coefficient `w~` at the half nodes `i + 1/2`
    pub flux: Vec<f64>,
    pub potential: Vec<f64>,
    /// `g_rr` and `Gamma^rho_{rho rho} = g_rr' / (2 g_rr)` at the nodes
    pub g_rr: Vec<f64>,
    pub christoffel: Vec<f64>,
    /// symmetric stiffness `A` (interior), so that `A x = lambda M x` with `M = diag(w rho_s h)`
    pub a_diag: Vec<f64>,
    pub a_off: Vec<f64>,
    pub mass: Vec<f64>,
}

impl ModeOperator {
    pub fn assemble(l: usize, profile: &CatenoidProfile, grid: &Grid) -> Result<Self> {
        let n = profile.n();
        let nn = n as f64;
        let big_l = (l * (l + n - 2)) as f64;
        let h = grid.h;
        let weight: Vec<f64> =
            grid.sample(|r| bracket(r).powi(n as i32 - 1) * profile.f_rho(r));
        let flux: Vec<f64> = grid
            .rho_half
            .iter()
            .zip(&grid.jac_half)
            .map(|(&m, j)| bracket(m).powi(n as i32 - 1) / profile.f_rho(m) / j)
            .collect();
        let potential: Vec<f64> = grid.sample(|r| {
            let b2 = 1.0 + r * r;
            -big_l / b2 + nn * (nn - 1.0) * b2.powf(-nn)
        });
        let g_rr = grid.sample(|r| profile.g_rr(r));
        let christoffel = grid.sample(|r| christoffel(r, n));
        let ni = grid.len() - 2;
        let mut a_diag = Vec::with_capacity(ni);
        let mut a_off = Vec::with_capacity(ni.saturating_sub(1));
        let mut mass = Vec::with_capacity(ni);
        for k in 0..ni {
            let i = k + 1;
            let mi = weight[i] * grid.jac[i] * h;
            a_diag.push(-(flux[i - 1] + flux[i]) / h + mi * potential[i]);
            mass.push(mi);
            if k + 1 < ni {
                a_off.push(flux[i] / h);
            }
        }
        Ok(Self { l, n, grid: grid.clone(), weight, flux, potential, g_rr, christoffel, a_diag, a_off, mass })
    }

    /// `L_l u` at the interior nodes, using the given end values of `u`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let h2 = self.grid.h * self.grid.h;
        (1..u.len() - 1)
            .map(|i| {
                let d = self.flux[i] * (u[i + 1] - u[i]) - self.flux[i - 1] * (u[i] - u[i - 1]);
                d / (self.weight[i] * self.grid.jac[i] * h2) + self.potential[i] * u[i]
            })
            .collect()
    }

    /// `M^{-1/2} A M^{-1/2}`, similar to `L_l` and symmetric.
    pub fn symmetric(&self) -> Result<SymTridiag> {
        let s: Vec<f64> = self.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let diag = self.a_diag.iter().zip(&s).map(|(a, si)| a * si * si).collect();
        let off = self.a_off.iter().enumerate().map(|(k, a)| a * s[k] * s[k + 1]).collect();
        Ok(SymTridiag::new(diag, off)?)
    }

    /// `sqrt(sum_i M_i r_i^2)` over interior residual values `r`.
    pub fn weighted_l2(&self, interior: &[f64]) -> f64 {
        interior.iter().zip(&self.mass).map(|(r, m)| m * r * r).sum::<f64>().sqrt()
    }
}

/// `g_rr'/(2 g_rr)` for `g_rr = rho^2 b^{m-1} / (b^m - 1)`, `b = 1 + rho^2`, `m = n - 1`.
fn christoffel(rho: f64, n: usize) -> f64 {
    let m = (n - 1) as f64;
    if rho.abs() < 1e-4 {
        // the three terms of d log g_rr cancel to (m - 1) rho + O(rho^3)
        return 0.5 * (m - 1.0) * rho;
    }
    let x = rho * rho;
    let b = 1.0 + x;
    let dlog = 2.0 / rho + 2.0 * (m - 1.0) * rho / b - 2.0 * m * rho * b.powf(m - 1.0) / (m * x.ln_1p()).exp_m1();
    0.5 * dlog
}
