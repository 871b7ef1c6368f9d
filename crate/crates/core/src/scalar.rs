//! Arbitrary-precision rational scalars.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ExactError;

/// An exact rational number, the ground field for all symbolic computation.
///
/// Always stored reduced with a positive denominator; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` as an exact rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        ExactScalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        ExactScalar(BigRational::from_integer(n))
    }

    pub fn from_parts(num: BigInt, den: BigInt) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(ExactScalar(BigRational::new(num, den)))
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Membership in the negative integers `{-1, -2, ...}`.
    pub fn is_negative_integer(&self) -> bool {
        self.is_integer() && self.is_negative()
    }

    /// Membership in the non-positive integers `{0, -1, -2, ...}`.
    pub fn is_nonpositive_integer(&self) -> bool {
        self.is_integer() && !self.is_positive()
    }

    pub fn abs(&self) -> Self {
        ExactScalar(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(ExactScalar(self.0.recip()))
    }

    /// Integer power; a negative exponent panics on zero.
    pub fn pow(&self, e: i32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mag = e.unsigned_abs();
        let base = if e > 0 {
            self.0.clone()
        } else {
            assert!(!self.is_zero(), "zero cannot be raised to a negative power");
            self.0.recip()
        };
        let num = base.numer().pow(mag);
        let den = base.denom().pow(mag);
        ExactScalar(BigRational::new(num, den))
    }

    /// Rising factorial `x (x+1) ... (x+len-1)`; the empty product is 1.
    pub fn pochhammer(&self, len: u32) -> Self {
        let mut acc = Self::one();
        let mut term = self.clone();
        for _ in 0..len {
            acc = &acc * &term;
            term = &term + &Self::one();
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-&self.0)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for ExactScalar {
    type Err = ExactError;

    /// Parses `p` or `p/q` with an optional leading sign on `p`.
    fn from_str(s: &str) -> Result<Self, ExactError> {
        let bad = |msg: &str| ExactError::SyntaxError {
            offset: 0,
            message: format!("{msg}: {s:?}"),
        };
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s.trim(), None),
        };
        let num: BigInt = num_str.parse().map_err(|_| bad("invalid integer"))?;
        let den: BigInt = match den_str {
            Some(d) => {
                if d.starts_with('-') || d.starts_with('+') {
                    return Err(bad("denominator must be unsigned"));
                }
                d.parse().map_err(|_| bad("invalid denominator"))?
            }
            None => BigInt::one(),
        };
        Self::from_parts(num, den)
    }
}

/// Binomial coefficient over arbitrary-precision integers.
pub(crate) fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = ExactScalar::ratio(10, 21);
        let b = ExactScalar::ratio(-7, 3);
        let c = &(&a + &b) - &b;
        assert_eq!(a, c);
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["0", "2", "-4", "3/2", "-7/12", "123456789123456789123/2"] {
            let x: ExactScalar = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
    }

    #[test]
    fn integer_predicates() {
        assert!(ExactScalar::int(-3).is_negative_integer());
        assert!(ExactScalar::int(0).is_nonpositive_integer());
        assert!(!ExactScalar::int(0).is_negative_integer());
        assert!(!ExactScalar::ratio(-1, 2).is_negative_integer());
        assert!(ExactScalar::ratio(-4, 2).is_negative_integer());
    }

    #[test]
    fn pochhammer_values() {
        // (1/2)_3 = (1/2)(3/2)(5/2) = 15/8
        assert_eq!(ExactScalar::ratio(1, 2).pochhammer(3), ExactScalar::ratio(15, 8));
        assert_eq!(ExactScalar::int(5).pochhammer(0), ExactScalar::one());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_big(5, 2), BigInt::from(10));
        assert_eq!(binomial_big(3, 5), BigInt::from(0));
    }
}
