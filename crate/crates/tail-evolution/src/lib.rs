//! Per-mode characteristic evolution of `-2 d_u d_r u + d_r^2 u - (3/4 + l(l+2)) r^{-2} u = f`
//! on outgoing null slices, with `r^p` energy ledgers, tail-exponent fits,
//! and the Hardy, interpolation, smoothing and shooting checks.

mod config;
mod cutoff;
mod energy;
mod evolve;
mod grid;
mod hardy;
mod shoot;
mod smoothing;
mod tail;

pub use config::{EvolutionConfig, InitialData, InnerBoundary, Source};
pub use cutoff::Cutoff;
pub use energy::{
    energies, hierarchy_check, intro_form_ratio, EnergyLedger, EnergySnapshot, HierarchyReport, LedgerWindow, PTerms,
    HIERARCHY_CONSTANT, Y_RANGE,
};
pub use evolve::{Evolution, ModeState, RunOutput};
pub use grid::RadialGrid;
pub use hardy::{hardy_check, hardy_check_fn, hardy_optimizer, hardy_variant_fn, hardy_variant_optimizer, interpolation_check, HardyReport, InterpolationReport};
pub use shoot::{shoot, ShootResult};
pub use smoothing::{Kernel, Smoother};
pub use tail::{free_space_oracle, local_slopes, observer_fit, tail_fit, TailFit};

use numerics::NumError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TailError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("time step {dtau} exceeds the CFL limit {limit}")]
    Cfl { dtau: f64, limit: f64 },
    #[error("initial data reach outside [{lo}, {hi}]")]
    Support { lo: f64, hi: f64 },
    #[error("solution blew up at tau = {tau} (max |u| = {max:e})")]
    Unstable { tau: f64, max: f64 },
    #[error("fit window spans {decades:.2} decades, need {needed}")]
    InsufficientDecades { decades: f64, needed: f64 },
    #[error("run too short: tau_max = {tau_max} below {needed}")]
    RunTooShort { tau_max: f64, needed: f64 },
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("hypothesis {0} of the interpolation inequality fails: {1}")]
    Hypothesis(u8, String),
    #[error("bracket endpoints exit with the same sign ({0})")]
    Bracket(String),
    #[error(transparent)]
    Numerics(#[from] NumError),
}

pub type Result<T> = std::result::Result<T, TailError>;

/// `<x> = sqrt(1 + x^2)`
pub fn japanese(x: f64) -> f64 {
    x.hypot(1.0)
}
