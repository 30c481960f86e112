//! Spectral theory of the catenoid's stability operator `L = Delta + |II|^2`,
//! one spherical-harmonic sector at a time.

mod dmatrix;
mod elliptic;
mod grid;
mod norms;
mod operator;
mod spectrum;
mod zero_modes;

pub use dmatrix::{dmatrix, DMatrixOptions};
pub use elliptic::{elliptic_ratio, elliptic_ratio_probe, random_bumps, ProbeReport};
pub use grid::{Grid, DEFAULT_ALPHA};
pub use norms::{weighted_norm, weighted_norm_sq};
pub use operator::ModeOperator;
pub use spectrum::{harmonic_multiplicity, morse_scan, spectrum, MorseScan, SpectralResult, DEFAULT_GAP_TOL};
pub use zero_modes::{recursion_ratio, zero_mode_series, ZeroModeSeries};

use catenoid_geometry::GeometryError;
use numerics::NumError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectrumError {
    #[error("grid rejected: {0}")]
    Grid(String),
    #[error("outside the admissible range: {0}")]
    Domain(String),
    #[error("numerical kernel failure: {0}")]
    Numerics(#[from] NumError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("series budget of {terms} terms exhausted with tail {tail:e}")]
    Budget { terms: usize, tail: f64 },
}

pub type Result<T> = std::result::Result<T, SpectrumError>;
