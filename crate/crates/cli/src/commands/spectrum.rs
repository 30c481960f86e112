use catenoid_geometry::{bracket, CatenoidProfile};
use rayon::prelude::*;
use serde::Serialize;
use stability_spectrum::{morse_scan, spectrum, Grid, ModeOperator};

use super::run_err;
use crate::{to_json, CliError, Ctx, Report};

pub const DEFAULTS: &[(&str, &str)] =
    &[("n", "4"), ("lmax", "6"), ("nodes", "2000"), ("rho_max", "30"), ("k", "4"), ("gap_tol", "1e-3")];

#[derive(Debug, Serialize)]
pub struct SectorRecord {
    pub l: usize,
    pub eigenvalues: Vec<f64>,
    pub mu2: Option<f64>,
    /// w-weighted residual of `L_1 <rho>^{-(n-1)}`; only the `l = 1` sector has this zero mode
    pub zero_residual: Option<f64>,
    pub positive: usize,
}

pub fn run(ctx: &mut Ctx) -> Result<Report, CliError> {
    let n = ctx.params.usize("n")?;
    let lmax = ctx.params.usize("lmax")?;
    let nodes = ctx.params.usize("nodes")?;
    let rho_max = ctx.params.f64("rho_max")?;
    let k = ctx.params.usize("k")?;
    let gap_tol = ctx.params.f64("gap_tol")?;
    let profile = CatenoidProfile::new(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let grid = Grid::new(rho_max, nodes).map_err(|e| CliError::Usage(e.to_string()))?;
    let scan = morse_scan(&profile, &grid, lmax, gap_tol).map_err(run_err)?;
    let sectors: Vec<SectorRecord> = (0..=lmax)
        .into_par_iter()
        .map(|l| {
            let op = ModeOperator::assemble(l, &profile, &grid).map_err(run_err)?;
            let res = spectrum(&op, k.clamp(1, nodes - 2)).map_err(run_err)?;
            let zero_residual = (l == 1).then(|| {
                let u = grid.sample(|r| bracket(r).powi(-(n as i32 - 1)));
                op.weighted_l2(&op.apply(&u))
            });
            Ok(SectorRecord { l, eigenvalues: res.eigenvalues, mu2: res.mu2, zero_residual, positive: scan.sectors[l].2 })
        })
        .collect::<Result<_, CliError>>()?;
    let doc = serde_json::json!({
        "n": n, "nodes": nodes, "rho_max": rho_max, "lmax": lmax, "gap_tol": gap_tol,
        "morse_index": scan.morse_index, "sectors": sectors,
    });
    ctx.out.write("spectrum.json", to_json(&doc).as_bytes())?;
    let mut rep = Report::default();
    if ctx.json {
        for s in &sectors {
            rep.line(serde_json::to_string(s).expect("serializable"));
        }
    } else {
        rep.line(format!("n = {n}, {nodes} nodes, rho_max = {rho_max}: Morse index {}", scan.morse_index));
        for s in &sectors {
            let top = s.eigenvalues.last().copied().unwrap_or(f64::NAN);
            let extra = match (s.mu2, s.zero_residual) {
                (Some(m), _) => format!("  mu^2 = {m:.6}"),
                (_, Some(z)) => format!("  zero-mode residual {z:.3e}"),
                _ => String::new(),
            };
            rep.line(format!("l = {}: top eigenvalue {top:.6e}, positive {}{extra}", s.l, s.positive));
        }
    }
    rep.require(scan.morse_index == 1, format!("Morse index {} is not 1", scan.morse_index));
    Ok(rep)
}
