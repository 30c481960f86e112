use num_rational::Rational64;
use serde::Serialize;

use crate::sum::{Calculus, OperatorSum};
use crate::term::{Monomial, OpTerm};
use crate::{q, AlgebraError};

fn term(c: Rational64, a: Rational64, d_r: u32, d_tau: u32, lap_s: u32) -> OpTerm {
    OpTerm::new(c, Monomial::new(a, d_r, d_tau, lap_s))
}

/// `K = r^{3/2} ∂_r`.
pub fn k_field() -> OperatorSum {
    OperatorSum::from_terms([term(q(1, 1), q(3, 2), 1, 0, 0)])
}

/// `Q_0 = −(3/4) r^{-2} − 2∂_r∂_τ + ∂_r² + r^{-2}Δ_S`.
pub fn q0() -> OperatorSum {
    OperatorSum::from_terms([
        term(q(-3, 4), q(-2, 1), 0, 0, 0),
        term(q(-2, 1), q(0, 1), 1, 1, 0),
        term(q(1, 1), q(0, 1), 2, 0, 0),
        term(q(1, 1), q(-2, 1), 0, 0, 1),
    ])
}

/// `Q_1 = −2∂_r∂_τ + ∂_r² − r^{-1}∂_τ − r^{-1}∂_r + r^{-2}Δ_S`.
pub fn q1() -> OperatorSum {
    OperatorSum::from_terms([
        term(q(-2, 1), q(0, 1), 1, 1, 0),
        term(q(1, 1), q(0, 1), 2, 0, 0),
        term(q(-1, 1), q(-1, 1), 0, 1, 0),
        term(q(-1, 1), q(-1, 1), 1, 0, 0),
        term(q(1, 1), q(-2, 1), 0, 0, 1),
    ])
}

/// `Q_1` built as `Q_0 − r^{-1}∂_τ − r^{-1}∂_r + c·r^{-2}` with a chosen potential
/// coefficient `c`; `c = 3/4` reproduces [`q1`].
pub fn corrupted_q1(potential: Rational64) -> OperatorSum {
    &q0() + &OperatorSum::from_terms([
        term(q(-1, 1), q(-1, 1), 0, 1, 0),
        term(q(-1, 1), q(-1, 1), 1, 0, 0),
        term(potential, q(-2, 1), 0, 0, 0),
    ])
}

/// One exact identity `lhs = rhs`, checked through `residual = rhs − lhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub pass: bool,
    pub residual: OperatorSum,
}

type Builder = fn(&Calculus) -> Result<(OperatorSum, OperatorSum), AlgebraError>;

fn r(a: Rational64) -> OperatorSum {
    OperatorSum::r_pow(a)
}

/// The named identities as `(name, builder of (lhs, rhs))`.
pub fn identity_suite() -> Vec<(&'static str, Builder)> {
    vec![
        ("[K,r^-2] = -2r^(-3/2)", |c| {
            Ok((c.commutator(&k_field(), &r(q(-2, 1)))?, r(q(-3, 2)).scale(q(-2, 1))))
        }),
        ("[K,d_r] = -3/2 r^-1 K", |c| {
            let rhs = c.compose(&r(q(-1, 1)), &k_field())?.scale(q(-3, 2));
            Ok((c.commutator(&k_field(), &OperatorSum::d_r())?, rhs))
        }),
        ("[K,-2d_r d_tau] = 3r^-1 d_tau K", |c| {
            let dd = c.compose(&OperatorSum::d_r(), &OperatorSum::d_tau())?.scale(q(-2, 1));
            let rhs = c.compose(&c.compose(&r(q(-1, 1)), &OperatorSum::d_tau())?, &k_field())?;
            Ok((c.commutator(&k_field(), &dd)?, rhs.scale(q(3, 1))))
        }),
        ("d_r K = 3/2 r^-1 K + r^(3/2) d_r^2", |c| {
            let d2 = c.compose(&OperatorSum::d_r(), &OperatorSum::d_r())?;
            let rhs = &c.compose(&r(q(-1, 1)), &k_field())?.scale(q(3, 2)) + &c.compose(&r(q(3, 2)), &d2)?;
            Ok((c.compose(&OperatorSum::d_r(), &k_field())?, rhs))
        }),
        ("[K,d_r^2] = -3r^-1 d_r K + 15/4 r^-2 K", |c| {
            let d2 = c.compose(&OperatorSum::d_r(), &OperatorSum::d_r())?;
            let a = c.compose(&c.compose(&r(q(-1, 1)), &OperatorSum::d_r())?, &k_field())?.scale(q(-3, 1));
            let b = c.compose(&r(q(-2, 1)), &k_field())?.scale(q(15, 4));
            Ok((c.commutator(&k_field(), &d2)?, &a + &b))
        }),
        ("[K,V] = -2r^(1/2)V, V = r^-2", |c| cancellation(c, r(q(-2, 1)))),
        ("[K,V] = -2r^(1/2)V, V = r^-2 d_tau", |c| {
            cancellation(c, c.compose(&r(q(-2, 1)), &OperatorSum::d_tau())?)
        }),
        ("[K,V] = -2r^(1/2)V, V = r^-2 lap_S", |c| {
            cancellation(c, c.compose(&r(q(-2, 1)), &OperatorSum::lap_s())?)
        }),
        // For first-order V the rule picks up one lower-order term.
        ("[K,V] = -2r^(1/2)V - 1/2 r^(-1/2) d_r, V = r^-1 d_r", |c| {
            let v = c.compose(&r(q(-1, 1)), &OperatorSum::d_r())?;
            let (lhs, main) = cancellation(c, v)?;
            let extra = c.compose(&r(q(-1, 2)), &OperatorSum::d_r())?.scale(q(-1, 2));
            Ok((lhs, &main + &extra))
        }),
        ("(K + 2r^(1/2)) Q0 = Q1 K", |c| {
            let left = &k_field() + &r(q(1, 2)).scale(q(2, 1));
            Ok((c.compose(&left, &q0())?, c.compose(&q1(), &k_field())?))
        }),
    ]
}

fn cancellation(c: &Calculus, v: OperatorSum) -> Result<(OperatorSum, OperatorSum), AlgebraError> {
    let lhs = c.commutator(&k_field(), &v)?;
    let rhs = c.compose(&r(q(1, 2)), &v)?.scale(q(-2, 1));
    Ok((lhs, rhs))
}

/// Checks `rhs − lhs = 0` exactly for every identity of [`identity_suite`].
pub fn verify_identity_suite(calc: &Calculus) -> Result<Vec<IdentityCheck>, AlgebraError> {
    identity_suite()
        .into_iter()
        .map(|(name, build)| {
            let (lhs, rhs) = build(calc)?;
            Ok(check(name, &lhs, &rhs))
        })
        .collect()
}

pub(crate) fn check(name: &str, lhs: &OperatorSum, rhs: &OperatorSum) -> IdentityCheck {
    let residual = rhs - lhs;
    IdentityCheck {
        identity: name.to_string(),
        pass: residual.is_zero(),
        residual,
    }
}

impl IdentityCheck {
    /// The `Q_1 K` identity evaluated with a substitute for `Q_1`.
    pub fn q1k_with(calc: &Calculus, q1_candidate: &OperatorSum) -> Result<Self, AlgebraError> {
        let left = &k_field() + &r(q(1, 2)).scale(q(2, 1));
        let lhs = calc.compose(&left, &q0())?;
        let rhs = calc.compose(q1_candidate, &k_field())?;
        Ok(check("(K + 2r^(1/2)) Q0 = Q1 K", &lhs, &rhs))
    }
}
