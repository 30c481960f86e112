//! Exact calculus on differential operators in one radial variable.
//!
//! An operator is a finite sum of monomials `c · r^a · ∂_r^i · ∂_τ^j · Δ_S^k`
//! with rational `c` and `a`. The only non-commuting pair is `∂_r` against
//! powers of `r`; `∂_τ` and the angular Laplacian `Δ_S` are formal central
//! symbols.

mod identities;
mod sum;
mod term;

pub use identities::{
    corrupted_q1, identity_suite, k_field, q0, q1, verify_identity_suite, IdentityCheck,
};
pub use sum::{Calculus, OperatorSum};
pub use term::{Monomial, OpTerm};

pub use num_rational::Rational64;

/// Failures of the exact calculus.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("exponent {exponent} has denominator above the bound {bound}")]
    DenominatorOverflow { exponent: Rational64, bound: i64 },
    #[error("rational arithmetic overflowed i64")]
    Overflow,
}

/// Shorthand for the rational `num/den`.
pub fn q(num: i64, den: i64) -> Rational64 {
    Rational64::new(num, den)
}
