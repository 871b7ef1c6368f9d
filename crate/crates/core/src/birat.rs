//! Reduced bivariate rational functions in `u` and `s`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::bipoly::BiPoly;
use crate::error::ExactError;
use crate::scalar::ExactScalar;
use crate::unipoly::UniPoly;

/// A rational function `num/den` with `num` and `den` coprime and `den`
/// content-normalized with positive graded-lex leading coefficient. This
/// makes the representation unique, so equality is structural.
#[derive(Clone, PartialEq, Eq)]
pub struct BiRat {
    num: BiPoly,
    den: BiPoly,
}

/// Removes the common factor of `num` and `den` and canonicalizes the sign
/// and content of the denominator.
pub fn reduce(num: BiPoly, den: BiPoly) -> Result<BiRat, ExactError> {
    if den.is_zero() {
        return Err(ExactError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(BiRat { num: BiPoly::zero(), den: BiPoly::one() });
    }
    let g = BiPoly::gcd(&num, &den);
    let num = num.exact_div(&g).expect("gcd divides numerator");
    let den = den.exact_div(&g).expect("gcd divides denominator");
    let (den_canon, factor) = den.content_normalized();
    let num = num.scale(&factor.recip().expect("nonzero factor"));
    Ok(BiRat { num, den: den_canon })
}

impl BiRat {
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Self, ExactError> {
        reduce(num, den)
    }

    pub fn from_poly(p: BiPoly) -> Self {
        BiRat { num: p, den: BiPoly::one() }
    }

    pub fn from_scalar(c: ExactScalar) -> Self {
        Self::from_poly(BiPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(BiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(BiPoly::one())
    }

    pub fn num(&self) -> &BiPoly {
        &self.num
    }

    pub fn den(&self) -> &BiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// True when the denominator does not involve `u`.
    pub fn den_is_s_only(&self) -> bool {
        self.den.deg_u() == 0
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        reduce(self.den.clone(), self.num.clone())
    }

    /// Integer shift of `u`; shifts are coefficient-lattice automorphisms,
    /// so reduction and canonical form are preserved.
    pub fn shift_u(&self, delta: i64) -> Self {
        BiRat {
            num: self.num.shift_u(delta),
            den: self.den.shift_u(delta),
        }
    }

    pub fn shift_s(&self, delta: i64) -> Self {
        BiRat {
            num: self.num.shift_s(delta),
            den: self.den.shift_s(delta),
        }
    }

    /// Exact evaluation, distinguishing poles from indeterminate points.
    pub fn eval(&self, u0: &ExactScalar, s0: &ExactScalar) -> Result<ExactScalar, ExactError> {
        let d = self.den.eval(u0, s0);
        if d.is_zero() {
            let n = self.num.eval(u0, s0);
            if n.is_zero() {
                return Err(ExactError::IndeterminateAtPoint { u: u0.clone(), s: s0.clone() });
            }
            return Err(ExactError::PoleAtPoint { u: u0.clone(), s: s0.clone() });
        }
        Ok(&self.num.eval(u0, s0) / &d)
    }

    /// Evaluation of a function of `u` alone at `u = u0`.
    pub fn eval_u_only(&self, u0: &ExactScalar) -> Result<ExactScalar, ExactError> {
        self.eval(u0, &ExactScalar::zero())
    }

    /// Substitution `s := k*u + c`, producing a rational function of `u`.
    pub fn subst_s_affine_u(&self, k: &ExactScalar, c: &ExactScalar) -> Result<Self, ExactError> {
        reduce(
            self.num.subst_s_affine_u(k, c),
            self.den.subst_s_affine_u(k, c),
        )
    }

    pub fn scale(&self, k: &ExactScalar) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        BiRat { num: self.num.scale(k), den: self.den.clone() }
    }

    /// `self^e` for integer exponents; negative exponents require nonzero.
    pub fn pow(&self, e: i32) -> Result<Self, ExactError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl Add<&BiRat> for &BiRat {
    type Output = BiRat;
    fn add(self, rhs: &BiRat) -> BiRat {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        reduce(num, den).expect("nonzero denominator")
    }
}

impl Sub<&BiRat> for &BiRat {
    type Output = BiRat;
    fn sub(self, rhs: &BiRat) -> BiRat {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        reduce(num, den).expect("nonzero denominator")
    }
}

impl Mul<&BiRat> for &BiRat {
    type Output = BiRat;
    fn mul(self, rhs: &BiRat) -> BiRat {
        let num = &self.num * &rhs.num;
        let den = &self.den * &rhs.den;
        reduce(num, den).expect("nonzero denominator")
    }
}

impl Div<&BiRat> for &BiRat {
    type Output = BiRat;
    fn div(self, rhs: &BiRat) -> BiRat {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        let num = &self.num * &rhs.den;
        let den = &self.den * &rhs.num;
        reduce(num, den).expect("nonzero denominator")
    }
}

impl Neg for &BiRat {
    type Output = BiRat;
    fn neg(self) -> BiRat {
        BiRat { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for BiRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.coeff((0, 0)).is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for BiRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Convenience builder: a ratio of univariate polynomials, each substituted
/// linearly into `(u, s)` as `poly(cu*u + cs*s + c0)`.
pub fn unipoly_over_uv(p: &UniPoly, cu: i64, cs: i64, c0: &ExactScalar) -> BiPoly {
    BiPoly::from_unipoly_subst(p, cu, cs, c0)
}
