use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A nondegenerate rational interval `[lo, hi]`. Depending on context it
/// stands for the closed interval or, for supports, the open one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[Rational; 2]", into = "[Rational; 2]")]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvalidInterval(format!("[{lo}, {hi}] is empty or degenerate")))
        }
    }

    /// Panicking constructor for literals known to be valid.
    pub fn of(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, hi).expect("valid interval literal")
    }

    pub fn unit() -> Self {
        Interval { lo: Rational::zero(), hi: Rational::one() }
    }

    pub fn ints(lo: i64, hi: i64) -> Result<Self> {
        Interval::new(Rational::int(lo), Rational::int(hi))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_open(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `other` sits inside the open interior of `self`.
    pub fn contains_strictly(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    /// Whether the open intervals meet.
    pub fn overlaps_open(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub fn translate(&self, by: &Rational) -> Interval {
        Interval { lo: &self.lo + by, hi: &self.hi + by }
    }

    /// Image under `t -> 1 - t`.
    pub fn mirror_unit(&self) -> Interval {
        Interval { lo: Rational::one() - &self.hi, hi: Rational::one() - &self.lo }
    }

    /// `[a/2^n, (a+1)/2^n]` for naturals `a`, `n`.
    pub fn is_standard_dyadic(&self) -> bool {
        let len = self.len();
        len.log2_exact().is_some_and(|k| k <= 0) && self.lo.is_multiple_of(&len)
    }

    /// Standard dyadic with closure inside `(0, 1)`.
    pub fn is_standard_dyadic_inside_unit(&self) -> bool {
        self.is_standard_dyadic() && self.lo.is_positive() && self.hi < Rational::one()
    }

    pub fn has_dyadic_endpoints(&self) -> bool {
        self.lo.is_dyadic() && self.hi.is_dyadic()
    }
}

impl TryFrom<[Rational; 2]> for Interval {
    type Error = Error;
    fn try_from([lo, hi]: [Rational; 2]) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for [Rational; 2] {
    fn from(iv: Interval) -> Self {
        [iv.lo, iv.hi]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Splits `[lo, hi]` (dyadic endpoints) greedily from the left into maximal
/// aligned dyadic pieces `[k 2^-n, (k+1) 2^-n]`.
pub fn dyadic_decomposition(lo: &Rational, hi: &Rational) -> Vec<Interval> {
    assert!(lo < hi && lo.is_dyadic() && hi.is_dyadic());
    let mut out = Vec::new();
    let mut x = lo.clone();
    while &x < hi {
        let mut size = (hi - &x).floor_pow2();
        while !x.is_multiple_of(&size) {
            size = &size / &Rational::int(2);
        }
        let next = &x + &size;
        out.push(Interval { lo: x, hi: next.clone() });
        x = next;
    }
    out
}
