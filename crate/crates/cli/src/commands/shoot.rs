use tail_evolution::shoot;

use crate::{num, to_json, CliError, Ctx, Report};

pub const DEFAULTS: &[(&str, &str)] = &[
    ("mu", "1"),
    ("lambda0", "1"),
    ("kappa", "0.1"),
    ("eps", "1e-3"),
    ("decay", "2.25"),
    ("forcing", "sin"),
    ("t_end", "50"),
    ("dt", "0.01"),
    ("width_log2", "-40"),
];

pub fn run(ctx: &mut Ctx) -> Result<Report, CliError> {
    let p = &ctx.params;
    let (mu, lambda0, kappa) = (p.f64("mu")?, p.f64("lambda0")?, p.f64("kappa")?);
    let (amp, decay) = (p.f64("eps")? * lambda0, p.f64("decay")?);
    let (t_end, dt) = (p.f64("t_end")?, p.f64("dt")?);
    let width_bound = 2f64.powf(p.f64("width_log2")?) * lambda0;
    let br = |t: f64| t.hypot(1.0);
    let res = match p.str("forcing") {
        "sin" => shoot(mu, move |t| amp * br(t).powf(-decay) * t.sin(), lambda0, kappa, t_end, dt),
        "zero" => shoot(mu, |_| 0.0, lambda0, kappa, t_end, dt),
        other => return Err(CliError::Usage(format!("forcing = {other:?} is not sin or zero"))),
    }
    .map_err(|e| match e {
        tail_evolution::TailError::Domain(_) => CliError::Usage(e.to_string()),
        other => CliError::Run(other.to_string()),
    })?;
    let lam = |t: f64| lambda0 * br(t).powf(-2.25 + kappa);
    let (t_last, b_last) = *res.trajectory.last().expect("trajectory has the initial point");
    let mut csv = String::from("tau,b,lambda\n");
    for &(t, b) in &res.trajectory {
        csv.push_str(&format!("{},{},{}\n", num(t), num(b), num(lam(t))));
    }
    ctx.out.write("trajectory.csv", csv.as_bytes())?;
    let off: Vec<_> = res
        .off_selection
        .iter()
        .map(|(db, t, s)| serde_json::json!({ "db": db, "exit_tau": t, "sign": s }))
        .collect();
    let doc = serde_json::json!({
        "b0": res.b0, "bracket_width": res.bracket_width, "iterations": res.iterations, "restarts": res.restarts,
        "b_end": b_last, "lambda_end": lam(t_last), "t_end": t_last,
        "audit_checked": res.audit_checked, "audit_violations": res.audit_violations, "off_selection": off,
    });
    ctx.out.write("shoot.json", to_json(&doc).as_bytes())?;
    let mut rep = Report::default();
    rep.require(res.bracket_width < width_bound, format!("bracket width {:e} not below {width_bound:e}", res.bracket_width));
    rep.require(b_last.abs() < lam(t_last), format!("|b(T)| = {:e} is not below lambda(T) = {:e}", b_last.abs(), lam(t_last)));
    rep.require(res.audit_violations == 0, format!("{} monotonicity violations", res.audit_violations));
    if ctx.json {
        rep.stdout = to_json(&doc);
    } else {
        rep.line(format!(
            "b(0) = {:.15e}, bracket width {:.3e}, |b(T)| / lambda(T) = {:.3e}, audit {} samples, {} violations",
            res.b0,
            res.bracket_width,
            b_last.abs() / lam(t_last),
            res.audit_checked,
            res.audit_violations
        ));
    }
    Ok(rep)
}
