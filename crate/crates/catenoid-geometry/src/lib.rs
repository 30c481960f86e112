//! Geometry of the Riemannian catenoid in `R^{n+1}`.
//!
//! The profile is written in the global coordinate `rho`, with geometric
//! radius `<rho> = sqrt(1 + rho^2)` and height `Z(rho)`.

mod profile;
pub mod sphere;

pub use profile::{
    asymptote_s, bracket, profile_derivative, profile_ode_residual, profile_ode_residuals, AsymptoteS,
    CatenoidProfile, MetricSample,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("dimension n = {0} is not supported (need n >= 3)")]
    Dimension(usize),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("grid too coarse near r = 1: first node {first}, first spacing {spacing}")]
    GridTooCoarse { first: f64, spacing: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] numerics::NumError),
    #[error("quadrature schemes disagree: {a} vs {b}")]
    SchemesDisagree { a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, GeometryError>;
