use catenoid_geometry::CatenoidProfile;
use foliation_metrics::{f0_radial_sweep, FoliationChart, Modulation};

use super::run_err;
use crate::{num, to_json, CliError, Ctx, Report};

pub const DEFAULTS: &[(&str, &str)] = &[
    ("n", "4"),
    ("r_f", "20"),
    ("delta1", "0.5"),
    ("mode", "ramp"),
    ("amplitude", "0.05"),
    ("direction", "1,0,0,0"),
    ("scale", "10"),
    ("tau", "-15"),
    ("angles", "1.0,0.7,0.4"),
    ("r_lo", "50"),
    ("r_hi", "400"),
    ("samples", "16"),
    ("h", "0.5"),
    ("slope_target", "-3"),
    ("slope_tol", "0.2"),
    ("frozen_tol", "1e-3"),
];

pub fn run(ctx: &mut Ctx) -> Result<Report, CliError> {
    let p = &ctx.params;
    let n = p.usize("n")?;
    let dir = p.list("direction")?;
    let angles = p.list("angles")?;
    if dir.len() != n || angles.len() + 1 != n {
        return Err(CliError::Usage(format!("direction needs {n} entries and angles {}", n - 1)));
    }
    let amp = p.f64("amplitude")?;
    let ell: Vec<f64> = dir.iter().map(|d| amp * d).collect();
    let frozen = match p.str("mode") {
        "ramp" => false,
        "frozen" => true,
        other => return Err(CliError::Usage(format!("mode = {other:?} is not ramp or frozen"))),
    };
    let curves = if frozen {
        Modulation::Frozen { ell, xi0: vec![0.0; n] }
    } else {
        Modulation::TanhRamp { amplitude: ell, scale: p.f64("scale")? }
    };
    let chart = FoliationChart::new(n, p.f64("r_f")?, p.f64("delta1")?, curves).map_err(|e| CliError::Usage(e.to_string()))?;
    let profile = CatenoidProfile::new(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let (lo, hi, m) = (p.f64("r_lo")?, p.f64("r_hi")?, p.usize("samples")?);
    if !(lo > 0.0 && hi > lo) || m < 2 {
        return Err(CliError::Usage(format!("need 0 < r_lo < r_hi and samples >= 2, got {lo}, {hi}, {m}")));
    }
    let radii: Vec<f64> = (0..m).map(|i| lo * (hi / lo).powf(i as f64 / (m - 1) as f64)).collect();
    let tau = p.f64("tau")?;
    let sweep = f0_radial_sweep(&chart, &profile, tau, &angles, &radii, p.f64("h")?).map_err(run_err)?;

    let mut csv = String::from("tau,r");
    for j in 0..angles.len() {
        csv.push_str(&format!(",theta{}", j + 1));
    }
    csv.push_str(",F0\n");
    for (r, f) in sweep.radii.iter().zip(&sweep.values) {
        csv.push_str(&format!("{},{}", num(tau), num(*r)));
        for a in &angles {
            csv.push_str(&format!(",{}", num(*a)));
        }
        csv.push_str(&format!(",{}\n", num(*f)));
    }
    ctx.out.write("f0.csv", csv.as_bytes())?;

    let mut rep = Report::default();
    let (target, tol) = (p.f64("slope_target")?, p.f64("slope_tol")?);
    let scaled_max = sweep.radii.iter().zip(&sweep.values).map(|(r, f)| f.abs() * r.powi(4)).fold(0.0, f64::max);
    let pass = if frozen {
        let ftol = p.f64("frozen_tol")?;
        rep.require(scaled_max < ftol, format!("frozen chart: max r^4 |F0| = {scaled_max:e} is not below {ftol:e}"));
        scaled_max < ftol
    } else {
        let ok = (sweep.slope - target).abs() <= tol;
        rep.require(ok, format!("fitted slope {:.4} on [{lo}, {hi}] is not within {tol} of {target}", sweep.slope));
        ok
    };
    let footer = serde_json::json!({
        "mode": p.str("mode"), "tau": tau, "r_lo": lo, "r_hi": hi,
        "fitted_slope": sweep.slope, "r2": sweep.r2, "max_r4_abs_f0": scaled_max,
        "slope_target": target, "slope_tol": tol, "pass": pass,
    });
    ctx.out.write("f0_fit.json", to_json(&footer).as_bytes())?;
    if ctx.json {
        rep.stdout = to_json(&footer);
    } else {
        if ctx.out.path().is_none() {
            rep.stdout = csv;
        }
        rep.line(format!("fitted slope {:.4} (R^2 {:.4}) on r in [{lo}, {hi}]", sweep.slope, sweep.r2));
    }
    Ok(rep)
}
