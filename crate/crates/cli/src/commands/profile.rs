use catenoid_geometry::CatenoidProfile;

use super::run_err;
use crate::{num, to_json, CliError, Ctx, Report};

pub const DEFAULTS: &[(&str, &str)] = &[("n", "4"), ("grid", "-30:30:601")];

fn parse_grid(s: &str) -> Result<(f64, f64, usize), CliError> {
    let bad = || CliError::Usage(format!("grid = {s:?} is not rho_min:rho_max:nodes"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let m: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(hi > lo) || m < 2 {
        return Err(bad());
    }
    Ok((lo, hi, m))
}

pub fn run(ctx: &mut Ctx) -> Result<Report, CliError> {
    let n = ctx.params.usize("n")?;
    let (lo, hi, m) = parse_grid(ctx.params.str("grid"))?;
    let p = CatenoidProfile::new(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut csv = String::from("rho,Z,g_rr,F_rho,II2\n");
    for i in 0..m {
        let rho = if i + 1 == m { hi } else { lo + (hi - lo) * i as f64 / (m - 1) as f64 };
        let z = p.z(rho).map_err(run_err)?;
        csv.push_str(&format!("{},{},{},{},{}\n", num(rho), num(z), num(p.g_rr(rho)), num(p.f_rho(rho)), num(p.ii2(rho))));
    }
    ctx.out.write("profile.csv", csv.as_bytes())?;
    let mut rep = Report::default();
    let summary = serde_json::json!({ "n": n, "nodes": m, "rho_min": lo, "rho_max": hi, "S": p.s() });
    if ctx.json {
        rep.stdout = to_json(&summary);
    } else if ctx.out.path().is_none() {
        rep.stdout = csv;
    } else {
        rep.line(format!("profile n = {n}: {m} samples on [{lo}, {hi}], S = {}", p.s()));
    }
    Ok(rep)
}
