use serde::Serialize;
use tail_evolution::{
    hierarchy_check, observer_fit, Evolution, EvolutionConfig, InitialData, Source, TailError, HIERARCHY_CONSTANT, Y_RANGE,
};

use crate::{num, to_json, CliError, Ctx, Report};

pub const DEFAULTS: &[(&str, &str)] = &[
    ("l", "0"),
    ("rmin", "2"),
    ("rmax", "200"),
    ("nodes", "801"),
    ("dtau", "0.02"),
    ("tmax", "100"),
    ("compactify", "true"),
    ("potential", "true"),
    ("cfl", "2"),
    ("cutoff_r", "10"),
    ("bump.amp", "1"),
    ("bump.center", "30"),
    ("bump.width", "10"),
    ("source.kind", "none"),
    ("source.amp", "1"),
    ("source.q", "2.25"),
    ("source.s", "4"),
    ("observers", "20"),
    ("p_list", "0.5,1,1.5,1.9"),
    ("ledger_every", "5"),
    ("local_alpha", "0.05"),
    ("tail.start", "10"),
];

/// Hierarchy violation margin on top of the frozen constant.
pub const MARGIN: f64 = 0.05;

fn tail_err(e: TailError) -> CliError {
    match e {
        TailError::Config(_) | TailError::Cfl { .. } | TailError::Support { .. } => CliError::Usage(e.to_string()),
        other => CliError::Run(other.to_string()),
    }
}

pub fn config(ctx: &Ctx) -> Result<EvolutionConfig, CliError> {
    let p = &ctx.params;
    let source = match p.str("source.kind") {
        "none" => Source::None,
        "power" => Source::Power { amp: p.f64("source.amp")?, q: p.f64("source.q")?, s: p.f64("source.s")? },
        other => return Err(CliError::Usage(format!("source.kind = {other:?} is not none or power"))),
    };
    let p_list = p.list("p_list")?;
    if let Some(bad) = p_list.iter().find(|v| !(**v > 0.0 && **v < 2.0)) {
        return Err(CliError::Usage(format!("p_list entry {bad} outside (0, 2)")));
    }
    Ok(EvolutionConfig {
        l: p.usize("l")?,
        potential: p.bool("potential")?,
        r_min: p.f64("rmin")?,
        r_max: p.f64("rmax")?,
        compactify: p.bool("compactify")?,
        nodes: p.usize("nodes")?,
        dtau: p.f64("dtau")?,
        tau_max: p.f64("tmax")?,
        cfl: p.f64("cfl")?,
        cutoff_r: p.f64("cutoff_r")?,
        initial: InitialData::Bump { amp: p.f64("bump.amp")?, center: p.f64("bump.center")?, width: p.f64("bump.width")? },
        source,
        observers: p.list("observers")?,
        p_list,
        ledger_every: p.usize("ledger_every")?.max(1),
        local_alpha: p.f64("local_alpha")?,
        ..EvolutionConfig::default()
    })
}

#[derive(Debug, Serialize)]
struct TailRecord {
    r: f64,
    exponent: Option<f64>,
    spread: Option<f64>,
    r2: Option<f64>,
    slope_exponent: Option<f64>,
    decades: Option<f64>,
    local: Vec<(f64, f64)>,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct WindowRecord {
    p: f64,
    tau1: f64,
    tau2: f64,
    lhs: f64,
    rhs: f64,
    ratio: f64,
    residual: f64,
    lhs_y: f64,
    rhs_y: f64,
    ratio_y: f64,
    residual_y: f64,
    y_asserted: bool,
}

pub fn run(ctx: &mut Ctx) -> Result<Report, CliError> {
    let cfg = config(ctx)?;
    let tail_start = ctx.params.f64("tail.start")?;
    let evo = Evolution::new(cfg.clone()).map_err(tail_err)?;
    let out = evo.run().map_err(tail_err)?;
    let mut rep = Report::default();

    // one row per ledger slice
    let every = cfg.ledger_every;
    let mut csv = String::from("tau");
    for p in &cfg.p_list {
        csv.push_str(&format!(",E_p{p}"));
    }
    for p in &cfg.p_list {
        csv.push_str(&format!(",tildeE_p{p}"));
    }
    for r in &cfg.observers {
        csv.push_str(&format!(",u_r{r}"));
    }
    csv.push('\n');
    for (row, step) in (0..out.taus.len()).step_by(every).enumerate() {
        csv.push_str(&num(out.taus[step]));
        let snap = out.ledger.snapshots.get(row);
        for k in 0..cfg.p_list.len() {
            csv.push_str(&format!(",{}", num(snap.map_or(f64::NAN, |s| s.per_p[k].e))));
        }
        for k in 0..cfg.p_list.len() {
            csv.push_str(&format!(",{}", num(snap.map_or(f64::NAN, |s| s.per_p[k].ey_intro))));
        }
        for (_, series) in &out.observers {
            csv.push_str(&format!(",{}", num(series[step])));
        }
        csv.push('\n');
    }
    ctx.out.write("timeseries.csv", csv.as_bytes())?;

    let tails: Vec<TailRecord> = cfg
        .observers
        .iter()
        .map(|&r| match observer_fit(&out, r, tail_start, ctx.seed) {
            Ok(f) => TailRecord {
                r,
                exponent: Some(f.exponent),
                spread: Some(f.spread),
                r2: Some(f.r2),
                slope_exponent: Some(f.slope_exponent),
                decades: Some(f.decades),
                local: f.local,
                error: None,
            },
            Err(e) => TailRecord {
                r,
                exponent: None,
                spread: None,
                r2: None,
                slope_exponent: None,
                decades: None,
                local: vec![],
                error: Some(e.to_string()),
            },
        })
        .collect();
    ctx.out.write("tails.json", to_json(&tails).as_bytes())?;

    // the intro form is a sum of nonnegative terms on [0, 3/2]
    let intro_min = out
        .ledger
        .snapshots
        .iter()
        .flat_map(|s| s.per_p.iter().filter(|t| t.p <= 1.5).map(|t| t.ey_intro))
        .fold(f64::INFINITY, f64::min);
    let hierarchy = if cfg.p_list.is_empty() {
        serde_json::json!({ "skipped": "empty p_list" })
    } else {
        let h = hierarchy_check(&out.ledger, HIERARCHY_CONSTANT, MARGIN).map_err(|e| CliError::Run(e.to_string()))?;
        rep.require(
            h.pass,
            format!(
                "hierarchy: max ratio {:.5}, Y {:.5}, bound {:.5}",
                h.max_ratio,
                h.max_ratio_y,
                HIERARCHY_CONSTANT * (1.0 + MARGIN)
            ),
        );
        let windows: Vec<WindowRecord> = h
            .windows
            .iter()
            .map(|w| WindowRecord {
                p: w.p,
                tau1: w.tau1,
                tau2: w.tau2,
                lhs: w.lhs,
                rhs: w.rhs,
                ratio: w.ratio,
                residual: w.residual,
                lhs_y: w.lhs_y,
                rhs_y: w.rhs_y,
                ratio_y: w.ratio_y,
                residual_y: w.residual_y,
                y_asserted: w.p < Y_RANGE,
            })
            .collect();
        rep.line(format!(
            "hierarchy: max ratio {:.5} (Y {:.5}, reported beyond range {:.5}) against C = {HIERARCHY_CONSTANT}",
            h.max_ratio, h.max_ratio_y, h.max_ratio_y_reported
        ));
        serde_json::json!({
            "constant": HIERARCHY_CONSTANT, "margin": MARGIN, "pass": h.pass,
            "max_ratio": h.max_ratio, "max_ratio_y": h.max_ratio_y, "max_ratio_y_reported": h.max_ratio_y_reported,
            "max_residual": h.max_residual, "max_residual_y": h.max_residual_y,
            "intro_form_min": if intro_min.is_finite() { Some(intro_min) } else { None },
            "windows": windows,
        })
    };
    if intro_min.is_finite() {
        rep.require(intro_min >= 0.0, format!("intro-form energy {intro_min:e} is negative"));
    }
    ctx.out.write("hierarchy.json", to_json(&hierarchy).as_bytes())?;

    for t in &tails {
        match (t.exponent, &t.error) {
            (Some(e), _) => rep.line(format!("r = {}: tail exponent {e:.4} +- {:.4}", t.r, t.spread.unwrap_or(0.0))),
            (_, Some(err)) => rep.line(format!("r = {}: no tail fit ({err})", t.r)),
            _ => {}
        }
    }
    rep.line(format!("{} steps to tau = {}", out.steps, out.final_state.tau));
    if ctx.json {
        rep.stdout = to_json(&serde_json::json!({ "tails": tails, "hierarchy": hierarchy, "steps": out.steps }));
    }
    Ok(rep)
}
