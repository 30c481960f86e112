use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Zero};
use serde::Serialize;

use crate::term::{Monomial, OpTerm};
use crate::AlgebraError;

/// A normalized finite sum of [`OpTerm`]s, sorted by monomial.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct OperatorSum {
    terms: Vec<OpTerm>,
}

impl OperatorSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::monomial(Rational64::one(), Monomial::identity())
    }

    pub fn constant(c: Rational64) -> Self {
        Self::monomial(c, Monomial::identity())
    }

    pub fn monomial(c: Rational64, m: Monomial) -> Self {
        Self::from_terms([OpTerm::new(c, m)])
    }

    /// Multiplication by `r^a`.
    pub fn r_pow(a: Rational64) -> Self {
        Self::monomial(Rational64::one(), Monomial::new(a, 0, 0, 0))
    }

    pub fn d_r() -> Self {
        Self::monomial(Rational64::one(), Monomial::new(Rational64::zero(), 1, 0, 0))
    }

    pub fn d_tau() -> Self {
        Self::monomial(Rational64::one(), Monomial::new(Rational64::zero(), 0, 1, 0))
    }

    pub fn lap_s() -> Self {
        Self::monomial(Rational64::one(), Monomial::new(Rational64::zero(), 0, 0, 1))
    }

    /// Collects like monomials and drops zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = OpTerm>>(terms: I) -> Self {
        let mut acc: BTreeMap<Monomial, Rational64> = BTreeMap::new();
        for t in terms {
            *acc.entry(t.monomial()).or_insert_with(Rational64::zero) += t.coeff;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: BTreeMap<Monomial, Rational64>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| OpTerm::new(c, m))
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[OpTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-normalizes; a no-op on any value built through this API.
    pub fn normalize(&self) -> Self {
        Self::from_terms(self.terms.iter().copied())
    }

    pub fn scale(&self, c: Rational64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| OpTerm { coeff: t.coeff * c, ..*t }))
    }

    /// Coefficient of a given monomial (zero if absent).
    pub fn coefficient(&self, m: &Monomial) -> Rational64 {
        self.terms
            .iter()
            .find(|t| t.monomial() == *m)
            .map(|t| t.coeff)
            .unwrap_or_else(Rational64::zero)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        let mut acc: BTreeMap<Monomial, Rational64> = BTreeMap::new();
        for t in self.terms.iter().chain(other.terms.iter()) {
            let e = acc.entry(t.monomial()).or_insert_with(Rational64::zero);
            *e = e.checked_add(&t.coeff).ok_or(AlgebraError::Overflow)?;
        }
        Ok(Self::from_map(acc))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.checked_add(&other.scale(-Rational64::one()))
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let s = t.to_string();
            if i == 0 {
                write!(f, "{s}")?;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {s}")?;
            }
        }
        Ok(())
    }
}

impl Add for &OperatorSum {
    type Output = OperatorSum;
    fn add(self, rhs: &OperatorSum) -> OperatorSum {
        OperatorSum::from_terms(self.terms.iter().chain(rhs.terms.iter()).copied())
    }
}

impl Add for OperatorSum {
    type Output = OperatorSum;
    fn add(self, rhs: OperatorSum) -> OperatorSum {
        &self + &rhs
    }
}

impl Neg for &OperatorSum {
    type Output = OperatorSum;
    fn neg(self) -> OperatorSum {
        self.scale(-Rational64::one())
    }
}

impl Neg for OperatorSum {
    type Output = OperatorSum;
    fn neg(self) -> OperatorSum {
        -&self
    }
}

impl Sub for &OperatorSum {
    type Output = OperatorSum;
    fn sub(self, rhs: &OperatorSum) -> OperatorSum {
        self + &(-rhs)
    }
}

impl Sub for OperatorSum {
    type Output = OperatorSum;
    fn sub(self, rhs: OperatorSum) -> OperatorSum {
        &self - &rhs
    }
}

/// Composition rules with a configurable bound on exponent denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Calculus {
    pub max_denominator: i64,
}

impl Default for Calculus {
    fn default() -> Self {
        Self { max_denominator: 2 }
    }
}

fn falling(a: Rational64, m: u32) -> Result<Rational64, AlgebraError> {
    let mut acc = Rational64::one();
    for t in 0..m {
        let f = a.checked_sub(&Rational64::from_integer(t as i64)).ok_or(AlgebraError::Overflow)?;
        acc = acc.checked_mul(&f).ok_or(AlgebraError::Overflow)?;
    }
    Ok(acc)
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut acc: i64 = 1;
    for t in 0..k as i64 {
        acc = acc * (n as i64 - t) / (t + 1);
    }
    acc
}

impl Calculus {
    pub fn with_bound(max_denominator: i64) -> Self {
        Self { max_denominator }
    }

    /// Rejects any exponent whose reduced denominator exceeds the bound.
    pub fn check(&self, a: &OperatorSum) -> Result<(), AlgebraError> {
        for t in a.terms() {
            if *t.r_exp.denom() > self.max_denominator {
                return Err(AlgebraError::DenominatorOverflow {
                    exponent: t.r_exp,
                    bound: self.max_denominator,
                });
            }
        }
        Ok(())
    }

    /// The operator product `a ∘ b`.
    ///
    /// Uses the closed form of the repeated rewrite `∂_r ∘ r^c = r^c ∂_r + c r^{c-1}`:
    /// `∂_r^i ∘ r^c = Σ_m C(i,m) c(c-1)…(c-m+1) r^{c-m} ∂_r^{i-m}`.
    pub fn compose(&self, a: &OperatorSum, b: &OperatorSum) -> Result<OperatorSum, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let mut acc: BTreeMap<Monomial, Rational64> = BTreeMap::new();
        for ta in a.terms() {
            for tb in b.terms() {
                let c0 = ta.coeff.checked_mul(&tb.coeff).ok_or(AlgebraError::Overflow)?;
                for m in 0..=ta.d_r {
                    let ff = falling(tb.r_exp, m)?;
                    if ff.is_zero() {
                        continue;
                    }
                    let c = c0
                        .checked_mul(&ff)
                        .and_then(|x| x.checked_mul(&Rational64::from_integer(binomial(ta.d_r, m))))
                        .ok_or(AlgebraError::Overflow)?;
                    let r_exp = ta
                        .r_exp
                        .checked_add(&tb.r_exp)
                        .and_then(|x| x.checked_sub(&Rational64::from_integer(m as i64)))
                        .ok_or(AlgebraError::Overflow)?;
                    let mono = Monomial::new(
                        r_exp,
                        ta.d_r - m + tb.d_r,
                        ta.d_tau + tb.d_tau,
                        ta.lap_s + tb.lap_s,
                    );
                    let e = acc.entry(mono).or_insert_with(Rational64::zero);
                    *e = e.checked_add(&c).ok_or(AlgebraError::Overflow)?;
                }
            }
        }
        let out = OperatorSum::from_map(acc);
        self.check(&out)?;
        Ok(out)
    }

    /// `[a, b] = a∘b − b∘a`.
    pub fn commutator(&self, a: &OperatorSum, b: &OperatorSum) -> Result<OperatorSum, AlgebraError> {
        self.compose(a, b)?.checked_sub(&self.compose(b, a)?)
    }

    /// `r^s ∘ a ∘ r^{-s}`.
    pub fn conjugate(&self, a: &OperatorSum, s: Rational64) -> Result<OperatorSum, AlgebraError> {
        let left = self.compose(&OperatorSum::r_pow(s), a)?;
        self.compose(&left, &OperatorSum::r_pow(-s))
    }
}
