use numerics::quad::PowerRule;

use crate::config::{EvolutionConfig, InitialData, Source};
use crate::energy::{energies, EnergyLedger};
use crate::grid::RadialGrid;
use crate::{Result, TailError};

/// Conjugated unknown on one outgoing slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    pub tau: f64,
    pub u: Vec<f64>,
}

/// A prepared run: grid, potential weights and the radial source integral.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub config: EvolutionConfig,
    pub grid: RadialGrid,
    c: f64,
    /// `r^{-2} dr/dx`
    pot: Vec<f64>,
    /// `int_{r_min}^{r} (radial source factor) dr`
    source_integral: Vec<f64>,
    growth_limit: f64,
}

/// Output of [`Evolution::run`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    /// times of the observer samples (every step, starting at 0)
    pub taus: Vec<f64>,
    /// `(r, U(tau, r))` with `U = r^{-3/2} u`
    pub observers: Vec<(f64, Vec<f64>)>,
    pub ledger: EnergyLedger,
    pub final_state: ModeState,
    pub steps: usize,
}

impl Evolution {
    pub fn new(config: EvolutionConfig) -> Result<Self> {
        config.validate()?;
        let grid = if config.compactify {
            RadialGrid::compact(config.r_min, config.scale.unwrap_or(config.cutoff_r), config.nodes)
        } else {
            RadialGrid::uniform(config.r_min, config.r_max, config.nodes)
        };
        let limit = config.cfl * grid.min_dr();
        if config.dtau > limit {
            return Err(TailError::Cfl { dtau: config.dtau, limit });
        }
        if let InitialData::Bump { center, width, .. } = config.initial {
            let hi = if config.compactify { f64::INFINITY } else { config.r_max };
            if center - width < config.r_min || center + width > hi {
                return Err(TailError::Support { lo: config.r_min, hi });
            }
        }
        let n = grid.len();
        let pot: Vec<f64> = (0..n)
            .map(|i| if grid.compact { 1.0 / (grid.scale * grid.x[i] * grid.x[i]) } else { 1.0 / (grid.r[i] * grid.r[i]) })
            .collect();
        let cutoff = config.cutoff();
        let source_integral = match &config.source {
            Source::None => vec![0.0; n],
            Source::Power { s, .. } if grid.compact => {
                // chi r^{3/2-s} dr = S chi (Sx)^{3/2-s} (1-x)^{s-7/2} dx
                let g: Vec<f64> =
                    (0..n).map(|i| grid.scale * cutoff.value(grid.r[i]) * grid.rs[i].powf(1.5 - s)).collect();
                PowerRule::new(n, grid.h, 0.0, s - 3.5).cumulative(&g)
            }
            src => {
                let g: Vec<f64> = (0..n)
                    .map(|i| if grid.inv_jac[i] == 0.0 { 0.0 } else { src.radial(grid.r[i], &cutoff) / grid.inv_jac[i] })
                    .collect();
                let mut out = vec![0.0; n];
                grid.cumulative(&g, &mut out);
                out
            }
        };
        let c = config.potential_constant();
        let mut evo = Self { config, grid, c, pot, source_integral, growth_limit: 0.0 };
        let u0 = evo.init()?;
        let scale = u0.u.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        evo.growth_limit = 1e8 * scale;
        Ok(evo)
    }

    /// Potential constant `3/4 + l(l+2)` (zero when disabled).
    pub fn potential_constant(&self) -> f64 {
        self.c
    }

    /// Angular eigenvalue `l(l+2)`.
    pub fn angular(&self) -> f64 {
        let l = self.config.l as f64;
        l * (l + 2.0)
    }

    pub fn init(&self) -> Result<ModeState> {
        let u: Vec<f64> = self.grid.r.iter().map(|&r| self.config.initial.value(r)).collect();
        if let Some(bad) = u.iter().position(|v| !v.is_finite()) {
            return Err(TailError::Domain(format!("initial data not finite at r = {}", self.grid.r[bad])));
        }
        Ok(ModeState { tau: 0.0, u })
    }

    /// `d_u u` on the slice: the constraint integrated outward from the inner edge.
    pub fn rhs(&self, tau: f64, u: &[f64], out: &mut [f64]) {
        let g = &self.grid;
        let d = g.dx(u);
        let w: Vec<f64> = u.iter().zip(&self.pot).map(|(a, b)| a * b).collect();
        g.cumulative(&w, out);
        let t = self.config.source.time_factor(tau);
        let edge = 0.5 * g.inv_jac[0] * d[0] - self.config.inner.value(tau);
        for i in 0..u.len() {
            out[i] = 0.5 * g.inv_jac[i] * d[i] - edge - 0.5 * (self.c * out[i] + t * self.source_integral[i]);
        }
    }

    /// One classical Runge-Kutta step.
    pub fn step(&self, state: &mut ModeState) -> Result<()> {
        let n = state.u.len();
        let dt = self.config.dtau;
        let t = state.tau;
        let mut k1 = vec![0.0; n];
        let mut k2 = vec![0.0; n];
        let mut k3 = vec![0.0; n];
        let mut k4 = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        self.rhs(t, &state.u, &mut k1);
        for i in 0..n {
            tmp[i] = state.u[i] + 0.5 * dt * k1[i];
        }
        self.rhs(t + 0.5 * dt, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = state.u[i] + 0.5 * dt * k2[i];
        }
        self.rhs(t + 0.5 * dt, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = state.u[i] + dt * k3[i];
        }
        self.rhs(t + dt, &tmp, &mut k4);
        let mut max = 0.0f64;
        for i in 0..n {
            state.u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            max = max.max(state.u[i].abs());
        }
        state.tau = t + dt;
        if !max.is_finite() || max > self.growth_limit {
            return Err(TailError::Unstable { tau: state.tau, max });
        }
        Ok(())
    }

    /// `U = r^{-3/2} u` at radius `r`.
    pub fn observe(&self, state: &ModeState, r: f64) -> f64 {
        self.grid.interpolate(&state.u, r) * r.powf(-1.5)
    }

    pub fn steps(&self) -> usize {
        (self.config.tau_max / self.config.dtau).round() as usize
    }

    pub fn run(&self) -> Result<RunOutput> {
        let mut state = self.init()?;
        let steps = self.steps();
        let cfg = &self.config;
        let mut taus = Vec::with_capacity(steps + 1);
        let mut obs: Vec<(f64, Vec<f64>)> = cfg.observers.iter().map(|&r| (r, Vec::with_capacity(steps + 1))).collect();
        let mut ledger = EnergyLedger::new(cfg.p_list.clone());
        let record = |state: &ModeState, taus: &mut Vec<f64>, obs: &mut Vec<(f64, Vec<f64>)>| {
            taus.push(state.tau);
            for (r, series) in obs.iter_mut() {
                series.push(self.observe(state, *r));
            }
        };
        record(&state, &mut taus, &mut obs);
        let ledger_on = cfg.ledger_every > 0 && !cfg.p_list.is_empty();
        if ledger_on {
            ledger.push(energies(self, &state, &cfg.p_list, &cfg.cutoff()));
        }
        for k in 1..=steps {
            self.step(&mut state)?;
            record(&state, &mut taus, &mut obs);
            if ledger_on && k % cfg.ledger_every == 0 {
                ledger.push(energies(self, &state, &cfg.p_list, &cfg.cutoff()));
            }
        }
        Ok(RunOutput { taus, observers: obs, ledger, final_state: state, steps })
    }
}
