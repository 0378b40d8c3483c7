//! Arbitrary-precision rationals used for every coordinate and slope.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        Rational(BigRational::new(numer, denom))
    }

    pub fn int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn half() -> Self {
        Rational::new(1, 2)
    }

    /// `2^exp` for any integer exponent.
    pub fn pow2(exp: i64) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            Rational(BigRational::from_integer(p))
        } else {
            Rational(BigRational::new(BigInt::one(), p))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Floor as a machine integer; panics on values beyond `i64`.
    pub fn floor_i64(&self) -> i64 {
        self.floor().to_i64().expect("coordinate out of i64 range")
    }

    pub fn ceil_i64(&self) -> i64 {
        self.ceil().to_i64().expect("coordinate out of i64 range")
    }

    /// Fractional part `x - floor(x)`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        Rational(&self.0 - self.0.floor())
    }

    /// Denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        is_power_of_two(self.0.denom())
    }

    /// `Some(k)` when the value equals `2^k` exactly.
    pub fn log2_exact(&self) -> Option<i64> {
        if !self.0.is_positive() {
            return None;
        }
        let (n, d) = (self.0.numer(), self.0.denom());
        if n.is_one() && is_power_of_two(d) {
            Some(-(d.bits() as i64 - 1))
        } else if d.is_one() && is_power_of_two(n) {
            Some(n.bits() as i64 - 1)
        } else {
            None
        }
    }

    pub fn is_power_of_two(&self) -> bool {
        self.log2_exact().is_some()
    }

    /// Exponent `k` such that the denominator is `2^k` (dyadic values only).
    pub fn dyadic_depth(&self) -> Option<u64> {
        if self.is_dyadic() {
            Some(self.0.denom().bits() - 1)
        } else {
            None
        }
    }

    /// Largest power of two `<= self` (self must be positive).
    pub fn floor_pow2(&self) -> Self {
        assert!(self.is_positive());
        let n = self.0.numer().bits() as i64;
        let d = self.0.denom().bits() as i64;
        let mut p = Rational::pow2(n - d);
        while &p > self {
            p = &p / &Rational::int(2);
        }
        loop {
            let next = &p * &Rational::int(2);
            if &next <= self {
                p = next;
            } else {
                return p;
            }
        }
    }

    /// `floor(self * 2^k) / 2^k`: the dyadic of depth `k` just below or at self.
    pub fn floor_to_grid(&self, k: u32) -> Self {
        let scale = BigInt::one() << k;
        let scaled = (&self.0 * BigRational::from_integer(scale.clone())).floor().to_integer();
        Rational(BigRational::new(scaled, scale))
    }

    pub fn ceil_to_grid(&self, k: u32) -> Self {
        let scale = BigInt::one() << k;
        let scaled = (&self.0 * BigRational::from_integer(scale.clone())).ceil().to_integer();
        Rational(BigRational::new(scaled, scale))
    }

    /// True when `self` is an integer multiple of `unit`.
    pub fn is_multiple_of(&self, unit: &Rational) -> bool {
        (&self.0 / &unit.0).is_integer()
    }

    pub fn min(a: &Rational, b: &Rational) -> Rational {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Rational, b: &Rational) -> Rational {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

}

pub(crate) fn is_power_of_two(n: &BigInt) -> bool {
    n.is_positive() && (n & (n - BigInt::one())).is_zero()
}

/// 2-adic valuation of a nonzero integer.
pub(crate) fn two_valuation(n: &BigInt) -> u64 {
    n.trailing_zeros().unwrap_or(0)
}

/// Odd part of a nonzero integer (sign kept).
pub(crate) fn odd_part(n: &BigInt) -> BigInt {
    let v = two_valuation(n);
    n >> v
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::from_big(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(n)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Shorthand constructor used throughout tests and constants.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}
