//! Rational numbers with an `i64` fast path and a big-integer fallback.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

/// A reduced fraction. Values that fit in `i64` numerator and denominator are
/// always stored in the small form, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rational {
    pub fn from_int(n: i64) -> Self {
        Rational::Small(Ratio::from_integer(n))
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::Small(Ratio::new(num, den))
    }

    pub fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN && d != i64::MIN {
                return Rational::Small(Ratio::new_raw(n, d));
            }
        }
        Rational::Big(r)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn zero() -> Self {
        Rational::from_int(0)
    }

    pub fn one() -> Self {
        Rational::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_zero(),
            Rational::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_one(),
            Rational::Big(r) => r.is_one(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_integer(),
            Rational::Big(r) => r.is_integer(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.numer()),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.denom()),
            Rational::Big(r) => r.denom().clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Rational::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if let (Rational::Small(x), Rational::Small(y)) = (self, other) {
            if let Some(z) = x.checked_add(y) {
                return Rational::Small(z);
            }
        }
        Self::from_big(self.to_big() + other.to_big())
    }

    pub fn sub(&self, other: &Self) -> Self {
        if let (Rational::Small(x), Rational::Small(y)) = (self, other) {
            if let Some(z) = x.checked_sub(y) {
                return Rational::Small(z);
            }
        }
        Self::from_big(self.to_big() - other.to_big())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let (Rational::Small(x), Rational::Small(y)) = (self, other) {
            if let Some(z) = x.checked_mul(y) {
                return Rational::Small(z);
            }
        }
        Self::from_big(self.to_big() * other.to_big())
    }

    pub fn neg(&self) -> Self {
        match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(-r),
            _ => Self::from_big(-self.to_big()),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::from_big(self.to_big().recip()))
    }

    pub fn abs(&self) -> Self {
        if self.to_big().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Parses `"p/q"` or `"p"`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().ok()?;
                let q: BigInt = q.trim().parse().ok()?;
                if q.is_zero() {
                    return None;
                }
                Some(Self::from_big(BigRational::new(p, q)))
            }
            None => Some(Self::from_bigint(s.parse().ok()?)),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(x), Rational::Small(y)) => x.cmp(y),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_falls_back_to_big() {
        let big = Rational::from_int(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Rational::Big(_)));
        let back = sq.mul(&big.recip().unwrap()).mul(&big.recip().unwrap());
        assert_eq!(back, Rational::one());
        assert!(matches!(back, Rational::Small(_)));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(Rational::parse("2/4").unwrap(), Rational::new(1, 2));
        assert_eq!(Rational::parse("-3").unwrap().to_string(), "-3");
        assert_eq!(Rational::new(-6, 4).to_string(), "-3/2");
        assert!(Rational::parse("1/0").is_none());
    }
}
