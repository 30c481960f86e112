use operator_algebra::{
    corrupted_q1, k_field, q, q1, verify_identity_suite, Calculus, IdentityCheck, Monomial, OpTerm,
    OperatorSum,
};

fn t(c: (i64, i64), a: (i64, i64), d_r: u32, d_tau: u32, lap_s: u32) -> OpTerm {
    OpTerm::new(q(c.0, c.1), Monomial::new(q(a.0, a.1), d_r, d_tau, lap_s))
}

#[test]
fn k_after_inverse_square() {
    let c = Calculus::default();
    let out = c.compose(&k_field(), &OperatorSum::r_pow(q(-2, 1))).unwrap();
    let expect = OperatorSum::from_terms([t((1, 1), (-1, 2), 1, 0, 0), t((-2, 1), (-3, 2), 0, 0, 0)]);
    assert_eq!(out, expect);
}

#[test]
fn commutator_examples() {
    let c = Calculus::default();
    let kd = c.commutator(&k_field(), &OperatorSum::d_r()).unwrap();
    assert_eq!(kd, OperatorSum::from_terms([t((-3, 2), (1, 2), 1, 0, 0)]));

    let td = c.commutator(&OperatorSum::d_tau(), &OperatorSum::d_r()).unwrap();
    assert!(td.is_zero());

    let v = c.compose(&OperatorSum::r_pow(q(-2, 1)), &OperatorSum::d_tau()).unwrap();
    let kv = c.commutator(&k_field(), &v).unwrap();
    assert_eq!(kv, OperatorSum::from_terms([t((-2, 1), (-3, 2), 0, 1, 0)]));
}

#[test]
fn conjugation_examples() {
    let c = Calculus::default();
    let out = c.conjugate(&OperatorSum::d_r(), q(3, 2)).unwrap();
    assert_eq!(out, OperatorSum::from_terms([t((1, 1), (0, 1), 1, 0, 0), t((-3, 2), (-1, 1), 0, 0, 0)]));

    let flat = OperatorSum::from_terms([
        t((-2, 1), (0, 1), 1, 1, 0),
        t((1, 1), (0, 1), 2, 0, 0),
        t((3, 1), (-1, 1), 1, 0, 0),
        t((-3, 1), (-1, 1), 0, 1, 0),
    ]);
    let conj = c.conjugate(&flat, q(3, 2)).unwrap();
    let expect = OperatorSum::from_terms([
        t((-2, 1), (0, 1), 1, 1, 0),
        t((1, 1), (0, 1), 2, 0, 0),
        t((-3, 4), (-2, 1), 0, 0, 0),
    ]);
    assert_eq!(conj, expect);
    assert_eq!(conj.coefficient(&Monomial::new(q(-1, 1), 0, 1, 0)), q(0, 1));

    assert_eq!(c.conjugate(&flat, q(0, 1)).unwrap(), flat);
}

#[test]
fn suite_passes_exactly() {
    let report = verify_identity_suite(&Calculus::default()).unwrap();
    assert_eq!(report.len(), 10);
    for r in &report {
        assert!(r.pass, "{} left residual {}", r.identity, r.residual);
        assert!(r.residual.is_zero());
    }
}

#[test]
fn first_order_cancellation_rule_is_not_exact() {
    // Without its correction term the rule fails for V = r^-1 ∂_r by exactly (1/2) r^{-1/2} ∂_r.
    let c = Calculus::default();
    let v = c.compose(&OperatorSum::r_pow(q(-1, 1)), &OperatorSum::d_r()).unwrap();
    let lhs = c.commutator(&k_field(), &v).unwrap();
    let rhs = c.compose(&OperatorSum::r_pow(q(1, 2)), &v).unwrap().scale(q(-2, 1));
    let residual = &rhs - &lhs;
    assert_eq!(residual, OperatorSum::from_terms([t((1, 2), (-1, 2), 1, 0, 0)]));
}

#[test]
fn corrupted_q1_leaves_known_residual() {
    let calc = Calculus::default();
    assert_eq!(corrupted_q1(q(3, 4)), q1());
    let bad = IdentityCheck::q1k_with(&calc, &corrupted_q1(q(1, 1))).unwrap();
    assert!(!bad.pass);
    assert_eq!(bad.residual, OperatorSum::from_terms([t((1, 4), (-1, 2), 1, 0, 0)]));
}

#[test]
fn json_record_shape() {
    let report = verify_identity_suite(&Calculus::default()).unwrap();
    let v = serde_json::to_value(&report[0]).unwrap();
    assert!(v["pass"].as_bool().unwrap());
    assert!(v["residual"].as_array().unwrap().is_empty());
    let bad = IdentityCheck::q1k_with(&Calculus::default(), &corrupted_q1(q(1, 1))).unwrap();
    let v = serde_json::to_value(&bad).unwrap();
    assert_eq!(v["residual"][0]["coeff"], "1/4");
    assert_eq!(v["residual"][0]["r_exp"], "-1/2");
    assert_eq!(v["residual"][0]["d_r"], 1);
}
