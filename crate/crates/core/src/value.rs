//! Exact extended-value arithmetic.
//!
//! Payoffs are rationals extended with negative infinity (a blocked outcome);
//! costs are nonnegative rationals extended with positive infinity (an
//! impossible transition). Whether a cost is exactly zero decides whether a
//! state is an equilibrium, so nothing here ever rounds.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// A single payoff entry: a finite rational or negative infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PayoffValue {
    Finite(Rat),
    NegInf,
}

impl PayoffValue {
    pub fn from_int(v: i64) -> Self {
        PayoffValue::Finite(Rat::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        PayoffValue::Finite(Rat::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PayoffValue::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            PayoffValue::Finite(r) => Some(r),
            PayoffValue::NegInf => None,
        }
    }

    /// Scale by a nonnegative integer count. `0 * NEG_INF = 0`: players who
    /// are not there contribute nothing, blocked or not.
    pub fn scaled(&self, count: u64) -> PayoffValue {
        if count == 0 {
            return PayoffValue::zero();
        }
        match self {
            PayoffValue::Finite(r) => PayoffValue::Finite(r * Rat::from_integer(BigInt::from(count))),
            PayoffValue::NegInf => PayoffValue::NegInf,
        }
    }

    /// Extended addition: NEG_INF absorbs any finite value.
    pub fn add(&self, other: &PayoffValue) -> PayoffValue {
        match (self, other) {
            (PayoffValue::Finite(a), PayoffValue::Finite(b)) => PayoffValue::Finite(a + b),
            _ => PayoffValue::NegInf,
        }
    }
}

impl PartialOrd for PayoffValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PayoffValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PayoffValue::Finite(a), PayoffValue::Finite(b)) => a.cmp(b),
            (PayoffValue::Finite(_), PayoffValue::NegInf) => Ordering::Greater,
            (PayoffValue::NegInf, PayoffValue::Finite(_)) => Ordering::Less,
            (PayoffValue::NegInf, PayoffValue::NegInf) => Ordering::Equal,
        }
    }
}

impl fmt::Display for PayoffValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PayoffValue::Finite(r) => write!(f, "{}", format_rat(r)),
            PayoffValue::NegInf => write!(f, "-inf"),
        }
    }
}

/// A transition cost: a nonnegative finite rational or positive infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CostValue {
    Finite(Rat),
    PosInf,
}

impl CostValue {
    pub fn zero() -> Self {
        CostValue::Finite(Rat::zero())
    }

    pub fn from_int(v: u64) -> Self {
        CostValue::Finite(Rat::from_integer(BigInt::from(v)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CostValue::Finite(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CostValue::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            CostValue::Finite(r) => Some(r),
            CostValue::PosInf => None,
        }
    }

    /// Extended addition: POS_INF absorbs.
    pub fn add(&self, other: &CostValue) -> CostValue {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => CostValue::Finite(a + b),
            _ => CostValue::PosInf,
        }
    }

    pub fn sum<'a>(values: impl IntoIterator<Item = &'a CostValue>) -> CostValue {
        let mut acc = CostValue::zero();
        for v in values {
            acc = acc.add(v);
        }
        acc
    }
}

impl PartialOrd for CostValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CostValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => a.cmp(b),
            (CostValue::Finite(_), CostValue::PosInf) => Ordering::Less,
            (CostValue::PosInf, CostValue::Finite(_)) => Ordering::Greater,
            (CostValue::PosInf, CostValue::PosInf) => Ordering::Equal,
        }
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostValue::Finite(r) => write!(f, "{}", format_rat(r)),
            CostValue::PosInf => write!(f, "inf"),
        }
    }
}

/// Canonical text form of a reduced rational: `p` when integral, else `p/q`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p`, `p/q`, or a leading-sign variant. Denominator must be nonzero;
/// the result is reduced by construction.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidInput(format!("malformed rational {s:?}"));
    let mut parts = s.splitn(2, '/');
    let numer_s = parts.next().ok_or_else(bad)?.trim();
    let numer: BigInt = numer_s.parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Rat::from_integer(numer)),
        Some(denom_s) => {
            let denom: BigInt = denom_s.trim().parse().map_err(|_| bad())?;
            if denom.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(numer, denom))
        }
    }
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_uint(v: u64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}
