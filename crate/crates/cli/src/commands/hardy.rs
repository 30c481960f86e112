use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tail_evolution::{hardy_check, hardy_optimizer, hardy_variant_fn, hardy_variant_optimizer, InitialData};

use super::run_err;
use crate::{to_json, CliError, Ctx, Report};

pub const DEFAULTS: &[(&str, &str)] = &[
    ("p_list", "0,0.5,1.5"),
    ("trials", "100"),
    ("r0", "1"),
    ("r1", "31"),
    ("nodes", "6001"),
    ("q_list", "0,2,6"),
    ("n", "4"),
    ("eps", "0.02"),
    ("optimizer_min", "0.9"),
];

/// One to three smooth bumps with random signs inside `[r0 + 0.5, r1 - 1]`.
fn random_parts(rng: &mut ChaCha8Rng, r0: f64, r1: f64) -> Vec<(f64, f64, f64)> {
    let k = rng.random_range(1..=3);
    let span = r1 - r0;
    (0..k)
        .map(|_| {
            let a = rng.random_range(r0 + 0.5..r0 + 0.6 * span);
            let b = (a + rng.random_range(1.0..0.3 * span)).min(r1 - 1.0);
            (rng.random_range(-2.0..2.0), a, b.max(a + 0.5))
        })
        .collect()
}

fn eval(parts: &[(f64, f64, f64)], x: f64, deriv: bool) -> f64 {
    parts
        .iter()
        .map(|&(c, a, b)| {
            let (m, w) = (0.5 * (a + b), 0.5 * (b - a));
            c * if deriv { InitialData::bump_derivative(x, m, w) } else { InitialData::bump_profile(x, m, w) }
        })
        .sum()
}

pub fn run(ctx: &mut Ctx) -> Result<Report, CliError> {
    let p = &ctx.params;
    let (r0, r1, nodes, trials) = (p.f64("r0")?, p.f64("r1")?, p.usize("nodes")?, p.usize("trials")?);
    if !(r0 > 0.0 && r1 > r0 + 3.0) || nodes < 5 {
        return Err(CliError::Usage(format!("need 0 < r0, r1 > r0 + 3 and nodes >= 5, got {r0}, {r1}, {nodes}")));
    }
    let (eps, opt_min, n) = (p.f64("eps")?, p.f64("optimizer_min")?, p.usize("n")?);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let r: Vec<f64> = (0..nodes).map(|i| r0 + (r1 - r0) * i as f64 / (nodes - 1) as f64).collect();
    let mut rep = Report::default();
    let mut random = Vec::new();
    let mut optimizer = Vec::new();
    for pw in p.list("p_list")? {
        let mut worst = 0.0f64;
        let mut all = true;
        for _ in 0..trials {
            let parts = random_parts(&mut rng, r0, r1);
            let phi: Vec<f64> = r.iter().map(|&x| eval(&parts, x, false)).collect();
            let h = hardy_check(&r, &phi, pw).map_err(|e| CliError::Usage(e.to_string()))?;
            worst = worst.max(h.ratio);
            all &= h.pass;
        }
        rep.require(all, format!("Hardy inequality failed for a random profile at p = {pw}"));
        random.push(serde_json::json!({ "p": pw, "trials": trials, "max_ratio": worst, "all_pass": all }));
        let opt = hardy_optimizer(pw, eps).map_err(run_err)?;
        rep.require(opt.ratio >= opt_min && opt.pass, format!("optimizer ratio {:.4} at p = {pw}", opt.ratio));
        optimizer.push(serde_json::json!({ "p": pw, "eps": eps, "ratio": opt.ratio, "pass": opt.pass }));
        rep.line(format!("p = {pw}: random max ratio {worst:.4}, optimizer ratio {:.4}", opt.ratio));
    }
    let mut variant = Vec::new();
    for q in p.list("q_list")? {
        let mut worst = 0.0f64;
        let mut all = true;
        for _ in 0..trials {
            let parts = random_parts(&mut rng, r0, r1);
            let h = hardy_variant_fn(|x| eval(&parts, x, false), |x| eval(&parts, x, true), q, n, r0, r1)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            worst = worst.max(h.ratio);
            all &= h.pass;
        }
        let opt = hardy_variant_optimizer(q, n, eps).map_err(run_err)?;
        rep.require(all, format!("variant failed for a random profile at q = {q}"));
        rep.require(opt.ratio >= opt_min && opt.pass, format!("variant optimizer ratio {:.4} at q = {q}", opt.ratio));
        variant.push(serde_json::json!({
            "q": q, "n": n, "max_ratio": worst, "all_pass": all, "optimizer_ratio": opt.ratio,
        }));
        rep.line(format!("q = {q}, n = {n}: random max ratio {worst:.4}, optimizer ratio {:.4}", opt.ratio));
    }
    let doc = serde_json::json!({ "random": random, "optimizer": optimizer, "variant": variant });
    ctx.out.write("hardy.json", to_json(&doc).as_bytes())?;
    if ctx.json {
        rep.stdout = to_json(&doc);
    }
    Ok(rep)
}
