use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// The coefficient-free part of a term. Field order is the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub r_exp: Rational64,
    pub d_r: u32,
    pub d_tau: u32,
    pub lap_s: u32,
}

impl Monomial {
    pub fn new(r_exp: Rational64, d_r: u32, d_tau: u32, lap_s: u32) -> Self {
        Self {
            r_exp,
            d_r,
            d_tau,
            lap_s,
        }
    }

    pub fn identity() -> Self {
        Self::new(Rational64::zero(), 0, 0, 0)
    }
}

/// One monomial with its exact coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OpTerm {
    #[serde(serialize_with = "ser_rational")]
    pub coeff: Rational64,
    #[serde(serialize_with = "ser_rational")]
    pub r_exp: Rational64,
    pub d_r: u32,
    pub d_tau: u32,
    pub lap_s: u32,
}

fn ser_rational<S: Serializer>(x: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(*x))
}

pub(crate) fn fmt_rational(x: Rational64) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl OpTerm {
    pub fn new(coeff: Rational64, mono: Monomial) -> Self {
        Self {
            coeff,
            r_exp: mono.r_exp,
            d_r: mono.d_r,
            d_tau: mono.d_tau,
            lap_s: mono.lap_s,
        }
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::new(self.r_exp, self.d_r, self.d_tau, self.lap_s)
    }
}

impl fmt::Display for OpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors: Vec<String> = Vec::new();
        if !self.r_exp.is_zero() {
            if self.r_exp.is_one() {
                factors.push("r".into());
            } else {
                factors.push(format!("r^({})", fmt_rational(self.r_exp)));
            }
        }
        for (sym, pow) in [("d_tau", self.d_tau), ("d_r", self.d_r), ("lap_S", self.lap_s)] {
            match pow {
                0 => {}
                1 => factors.push(sym.into()),
                k => factors.push(format!("{sym}^{k}")),
            }
        }
        let c = self.coeff;
        let body = factors.join("*");
        if body.is_empty() {
            return write!(f, "{}", fmt_rational(c));
        }
        if c.is_one() {
            write!(f, "{body}")
        } else if (-c).is_one() {
            write!(f, "-{body}")
        } else if c.is_integer() || c.is_negative() && c.abs().is_integer() {
            write!(f, "{}*{body}", fmt_rational(c))
        } else {
            write!(f, "({})*{body}", fmt_rational(c))
        }
    }
}
