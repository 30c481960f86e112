//! Kinematics of the moving, boosted catenoid in the far region: Lorentz boosts,
//! the hyperboloidal foliation `(tau, r, theta)`, the metric blocks in that chart,
//! and the graph source term `F0`.

mod blend;
mod boost;
mod chart;
mod metric;
mod source;

pub use blend::{smoothed_max, smoothed_max_grad, Blend};
pub use boost::{boost, boost_spatial, minkowski};
pub use chart::{FoliationChart, Modulation};
pub use metric::{box_m0, metric_blocks, MetricBlocks};
pub use source::{f0_radial_sweep, q_wp, source_f0, source_f0_at, F0Sweep};

use catenoid_geometry::GeometryError;
use numerics::NumError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FoliationError {
    #[error("boost speed |ell| = {0} is not below 1")]
    Speed(f64),
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("point outside the hyperboloidal region: {0}")]
    Regime(String),
    #[error("Newton iteration for sigma stalled after {iterations} steps (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Numerics(#[from] NumError),
}

pub type Result<T> = std::result::Result<T, FoliationError>;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `<x> = sqrt(1 + x^2)`
pub(crate) fn japanese(x: f64) -> f64 {
    x.hypot(1.0)
}
