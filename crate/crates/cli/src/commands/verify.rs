use operator_algebra::{corrupted_q1, q, verify_identity_suite, Calculus, IdentityCheck, Monomial, OpTerm, OperatorSum};

use super::run_err;
use crate::{to_json, CliError, Ctx, Report};

pub const DEFAULTS: &[(&str, &str)] = &[("corrupt_q1", "false")];

const Q1K: &str = "(K + 2r^(1/2)) Q0 = Q1 K";

fn t(c: (i64, i64), a: (i64, i64), d_r: u32, d_tau: u32) -> OpTerm {
    OpTerm::new(q(c.0, c.1), Monomial::new(q(a.0, a.1), d_r, d_tau, 0))
}

/// `r^{3/2}` conjugation of the flat radial wave operator in `n = 4`,
/// `-2 d_r d_tau + d_r^2 + 3 r^-1 d_r - 3 r^-1 d_tau`.
pub fn conjugation_check(calc: &Calculus) -> Result<IdentityCheck, CliError> {
    let flat = OperatorSum::from_terms([t((-2, 1), (0, 1), 1, 1), t((1, 1), (0, 1), 2, 0), t((3, 1), (-1, 1), 1, 0), t((-3, 1), (-1, 1), 0, 1)]);
    let conj = calc.conjugate(&flat, q(3, 2)).map_err(run_err)?;
    let expect = OperatorSum::from_terms([t((-2, 1), (0, 1), 1, 1), t((1, 1), (0, 1), 2, 0), t((-3, 4), (-2, 1), 0, 0)]);
    let residual = &expect - &conj;
    Ok(IdentityCheck {
        identity: "r^(3/2) Box r^(-3/2) = -2 d_r d_tau + d_r^2 - 3/4 r^-2".into(),
        pass: residual.is_zero(),
        residual,
    })
}

pub fn checks(corrupt: bool) -> Result<Vec<IdentityCheck>, CliError> {
    let calc = Calculus::default();
    let mut out = verify_identity_suite(&calc).map_err(run_err)?;
    if corrupt {
        let bad = IdentityCheck::q1k_with(&calc, &corrupted_q1(q(1, 1))).map_err(run_err)?;
        for c in out.iter_mut().filter(|c| c.identity == Q1K) {
            *c = bad.clone();
        }
    }
    out.push(conjugation_check(&calc)?);
    Ok(out)
}

pub fn run(ctx: &mut Ctx) -> Result<Report, CliError> {
    let checks = checks(ctx.params.bool("corrupt_q1")?)?;
    let mut rep = Report::default();
    let json = to_json(&checks);
    ctx.out.write("verify.json", json.as_bytes())?;
    if ctx.json {
        rep.stdout = json;
    } else {
        let width = checks.iter().map(|c| c.identity.len()).max().unwrap_or(8);
        rep.line(format!("{:width$}  status  residual", "identity"));
        for c in &checks {
            let res = if c.residual.is_zero() { "0".to_string() } else { c.residual.to_string() };
            rep.line(format!("{:width$}  {:6}  {res}", c.identity, if c.pass { "pass" } else { "FAIL" }));
        }
    }
    for c in checks.iter().filter(|c| !c.pass) {
        rep.failures.push(format!("identity {} leaves residual {}", c.identity, c.residual));
    }
    Ok(rep)
}
