use std::fmt;
use std::sync::Arc;

use crate::cutoff::Cutoff;
use crate::{japanese, Result, TailError};

pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Data for the conjugated unknown on the initial slice.
#[derive(Clone)]
pub enum InitialData {
    /// `amp * exp(-1/(1 - z^2)) * r^{3/2}` with `z = (r - center)/width`
    Bump { amp: f64, center: f64, width: f64 },
    /// the conjugated unknown itself; must be finite at `r = inf` on compact grids
    Custom(Profile),
}

impl InitialData {
    pub fn bump_profile(r: f64, center: f64, width: f64) -> f64 {
        let z = (r - center) / width;
        if z.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - z * z)).exp()
        }
    }

    /// `d/dr` of [`InitialData::bump_profile`].
    pub fn bump_derivative(r: f64, center: f64, width: f64) -> f64 {
        let z = (r - center) / width;
        if z.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - z * z;
        (-1.0 / q).exp() * (-2.0 * z / (q * q)) / width
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            InitialData::Bump { amp, center, width } => {
                if r.is_infinite() {
                    0.0
                } else {
                    amp * Self::bump_profile(r, *center, *width) * r.powf(1.5)
                }
            }
            InitialData::Custom(f) => f(r),
        }
    }
}

impl fmt::Debug for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialData::Bump { amp, center, width } => {
                write!(f, "Bump {{ amp: {amp}, center: {center}, width: {width} }}")
            }
            InitialData::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Forcing `f~ = r^{3/2} f` of the conjugated equation.
#[derive(Clone)]
pub enum Source {
    None,
    /// `amp <tau>^{-q} r^{-s} chi_R(r)` for the unconjugated `f`
    Power { amp: f64, q: f64, s: f64 },
    /// `time(tau) * radial(r)`; `radial` must decay faster than every power of `r`
    Separable { time: Profile, radial: Profile },
}

impl Source {
    pub fn time_factor(&self, tau: f64) -> f64 {
        match self {
            Source::None => 0.0,
            Source::Power { amp, q, .. } => amp * japanese(tau).powf(-q),
            Source::Separable { time, .. } => time(tau),
        }
    }

    /// Radial factor of `f~`, without the time factor.
    pub fn radial(&self, r: f64, cutoff: &Cutoff) -> f64 {
        match self {
            Source::None => 0.0,
            Source::Power { s, .. } => {
                if r.is_infinite() {
                    0.0
                } else {
                    cutoff.value(r) * r.powf(1.5 - s)
                }
            }
            Source::Separable { radial, .. } => {
                if r.is_infinite() {
                    0.0
                } else {
                    radial(r)
                }
            }
        }
    }

    /// Radial factor of `f_1 = (r^{3/2} d_r + 2 r^{1/2}) f~`.
    pub fn radial_y(&self, r: f64, cutoff: &Cutoff) -> f64 {
        match self {
            Source::None => 0.0,
            Source::Power { s, .. } => {
                if r.is_infinite() {
                    return 0.0;
                }
                let k = 1.5 - s;
                cutoff.d1(r) * r.powf(k + 1.5) + (k + 2.0) * cutoff.value(r) * r.powf(k + 0.5)
            }
            Source::Separable { radial, .. } => {
                if r.is_infinite() {
                    return 0.0;
                }
                let h = 1e-3 * r.max(1.0);
                let d = numerics::fd::central5(radial(r - 2.0 * h), radial(r - h), radial(r + h), radial(r + 2.0 * h), h);
                r.powf(1.5) * d + 2.0 * r.sqrt() * radial(r)
            }
        }
    }

    /// Decay `d` with `f~ ~ r^{-d}`; infinite for compactly supported or rapidly decaying sources.
    pub fn decay(&self) -> f64 {
        match self {
            Source::Power { s, .. } => s - 1.5,
            _ => f64::INFINITY,
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Source::None)
    }
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::None => write!(f, "None"),
            Source::Power { amp, q, s } => write!(f, "Power {{ amp: {amp}, q: {q}, s: {s} }}"),
            Source::Separable { .. } => write!(f, "Separable"),
        }
    }
}

/// Value of `d_u` of the conjugated unknown at the inner edge.
#[derive(Clone, Default)]
pub enum InnerBoundary {
    /// `d_u = 0`: Dirichlet wall
    #[default]
    Reflective,
    Prescribed(Profile),
}

impl InnerBoundary {
    pub fn value(&self, tau: f64) -> f64 {
        match self {
            InnerBoundary::Reflective => 0.0,
            InnerBoundary::Prescribed(g) => g(tau),
        }
    }
}

impl fmt::Debug for InnerBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InnerBoundary::Reflective => write!(f, "Reflective"),
            InnerBoundary::Prescribed(_) => write!(f, "Prescribed"),
        }
    }
}

/// Everything a run needs.
#[derive(Debug, Clone)]
pub struct EvolutionConfig {
    /// angular mode on `S^3`
    pub l: usize,
    /// include `(3/4 + l(l+2)) r^{-2}`; disabling it is only meant for tests
    pub potential: bool,
    pub r_min: f64,
    /// outer edge when not compactified
    pub r_max: f64,
    pub compactify: bool,
    /// `s` in `r = s x/(1 - x)`; defaults to the cutoff radius
    pub scale: Option<f64>,
    pub nodes: usize,
    pub dtau: f64,
    pub tau_max: f64,
    /// `dtau <= cfl * dr_min`
    pub cfl: f64,
    /// `R` in `chi_R`
    pub cutoff_r: f64,
    pub initial: InitialData,
    pub source: Source,
    pub inner: InnerBoundary,
    pub observers: Vec<f64>,
    pub p_list: Vec<f64>,
    /// record energies every this many steps (0 disables the ledger)
    pub ledger_every: usize,
    /// `alpha` in the local energy `int r^{-1-alpha} (d_u u)^2 dr`
    pub local_alpha: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            l: 0,
            potential: true,
            r_min: 2.0,
            r_max: 200.0,
            compactify: true,
            scale: None,
            nodes: 801,
            dtau: 0.02,
            tau_max: 100.0,
            cfl: 2.0,
            cutoff_r: 10.0,
            initial: InitialData::Bump { amp: 1.0, center: 30.0, width: 10.0 },
            source: Source::None,
            inner: InnerBoundary::Reflective,
            observers: vec![20.0],
            p_list: vec![0.5, 1.0, 1.5, 1.9],
            ledger_every: 5,
            local_alpha: 0.05,
        }
    }
}

impl EvolutionConfig {
    pub fn potential_constant(&self) -> f64 {
        if self.potential {
            let l = self.l as f64;
            0.75 + l * (l + 2.0)
        } else {
            0.0
        }
    }

    pub fn cutoff(&self) -> Cutoff {
        Cutoff::Quintic { r: self.cutoff_r }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(TailError::Config(m));
        if !(self.r_min > 0.0) {
            return bad(format!("r_min = {} must be positive", self.r_min));
        }
        if !self.compactify && !(self.r_max > self.r_min) {
            return bad(format!("r_max = {} must exceed r_min = {}", self.r_max, self.r_min));
        }
        if self.nodes < 16 {
            return bad(format!("need at least 16 nodes, got {}", self.nodes));
        }
        if !(self.dtau > 0.0) || !(self.tau_max > 0.0) {
            return bad(format!("dtau = {} and tau_max = {} must be positive", self.dtau, self.tau_max));
        }
        if !(self.cutoff_r > self.r_min) {
            return bad(format!("cutoff radius {} must exceed r_min = {}", self.cutoff_r, self.r_min));
        }
        if let Some(s) = self.scale {
            if !(s > 0.0) {
                return bad(format!("scale = {s} must be positive"));
            }
        }
        if let Source::Power { s, q, .. } = self.source {
            if !(s > 2.5) {
                return bad(format!("source decay s = {s} must exceed 5/2"));
            }
            if !(q >= 0.0) {
                return bad(format!("source time decay q = {q} must be nonnegative"));
            }
        }
        for &p in &self.p_list {
            if !(0.0..=2.0).contains(&p) {
                return bad(format!("weight p = {p} outside [0, 2]"));
            }
        }
        if !(self.local_alpha > 0.0) {
            return bad(format!("local_alpha = {} must be positive", self.local_alpha));
        }
        let hi = if self.compactify { f64::INFINITY } else { self.r_max };
        for &r in &self.observers {
            if !(r >= self.r_min && r < hi) {
                return bad(format!("observer radius {r} outside the grid"));
            }
        }
        Ok(())
    }
}
