use tail_evolution::{Kernel, Smoother};

use super::run_err;
use crate::{num, to_json, CliError, Ctx, Report};

pub const DEFAULTS: &[(&str, &str)] =
    &[("m", "2000"), ("t_max", "5"), ("samples", "51"), ("dt", "0.01"), ("cubic", "0.5,2,-1,0.3"), ("tol", "1e-8")];

pub fn run(ctx: &mut Ctx) -> Result<Report, CliError> {
    let p = &ctx.params;
    let c = p.list("cubic")?;
    if c.len() != 4 {
        return Err(CliError::Usage("cubic takes four coefficients c0,c1,c2,c3".into()));
    }
    let (t_max, samples, dt, tol) = (p.f64("t_max")?, p.usize("samples")?, p.f64("dt")?, p.f64("tol")?);
    if !(t_max > 1.0) || samples < 2 || !(dt > 0.0) {
        return Err(CliError::Usage("need t_max > 1, samples >= 2 and dt > 0".into()));
    }
    let sm = Smoother::new(Kernel::standard(p.usize("m")?).map_err(run_err)?);
    let h = |s: f64| c[0] + s * (c[1] + s * (c[2] + s * c[3]));
    let mut csv = String::from("t,h,Sh,tildeSh,d_tildeSh,Sh_minus_h,defect\n");
    let mut worst = 0.0f64;
    let mut constant = 0.0f64;
    for k in 0..samples {
        let t = t_max * k as f64 / (samples - 1) as f64;
        let (s, st, ds) = (sm.s(h, t), sm.s_tilde(h, t), sm.d_s_tilde(h, t, dt));
        let defect = (ds - (s - h(t))).abs();
        worst = worst.max(defect);
        if t >= 1.0 {
            constant = constant.max((sm.s(|_| 1.0, t) - 1.0).abs());
        }
        let row = [t, h(t), s, st, ds, s - h(t), defect].map(num);
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    ctx.out.write("smooth.csv", csv.as_bytes())?;
    let doc = serde_json::json!({ "max_defect": worst, "tol": tol, "constant_max_error": constant });
    ctx.out.write("smooth.json", to_json(&doc).as_bytes())?;
    let mut rep = Report::default();
    rep.require(worst <= tol, format!("max |d/dt tildeS h - (S - I) h| = {worst:e} above {tol:e}"));
    rep.require(constant <= 1e-12, format!("S1 - 1 = {constant:e} for t >= 1"));
    if ctx.json {
        rep.stdout = to_json(&doc);
    } else {
        rep.line(format!("max defect {worst:.3e} (tol {tol:e}); constant input error {constant:.3e}"));
    }
    Ok(rep)
}
