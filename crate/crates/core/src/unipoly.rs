//! Dense univariate polynomials over the exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::ExactScalar;

/// The symbols a univariate polynomial may live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Z,
    T,
    U,
    S,
}

impl Symbol {
    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::Z => "z",
            Symbol::T => "t",
            Symbol::U => "u",
            Symbol::S => "s",
        }
    }
}

/// Univariate polynomial with ascending exact coefficients and no trailing
/// zero coefficient; the zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    sym: Symbol,
    coeffs: Vec<ExactScalar>,
}

impl UniPoly {
    pub fn new(sym: Symbol, mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { sym, coeffs }
    }

    pub fn zero(sym: Symbol) -> Self {
        UniPoly { sym, coeffs: Vec::new() }
    }

    pub fn one(sym: Symbol) -> Self {
        Self::constant(sym, ExactScalar::one())
    }

    pub fn constant(sym: Symbol, c: ExactScalar) -> Self {
        Self::new(sym, vec![c])
    }

    pub fn var(sym: Symbol) -> Self {
        Self::new(sym, vec![ExactScalar::zero(), ExactScalar::one()])
    }

    /// The monic linear polynomial `x + a0`.
    pub fn linear(sym: Symbol, a0: ExactScalar) -> Self {
        Self::new(sym, vec![a0, ExactScalar::one()])
    }

    pub fn monomial(sym: Symbol, c: ExactScalar, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero(sym);
        }
        let mut coeffs = vec![ExactScalar::zero(); deg + 1];
        coeffs[deg] = c;
        UniPoly { sym, coeffs }
    }

    pub fn symbol(&self) -> Symbol {
        self.sym
    }

    pub fn with_symbol(&self, sym: Symbol) -> Self {
        UniPoly { sym, coeffs: self.coeffs.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree with the convention that the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> ExactScalar {
        self.coeffs.last().cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, k: &ExactScalar) -> Self {
        if k.is_zero() {
            return Self::zero(self.sym);
        }
        UniPoly {
            sym: self.sym,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Divides by the leading coefficient; panics on the zero polynomial.
    pub fn monic(&self) -> Self {
        let lc = self.leading_coeff();
        assert!(!lc.is_zero(), "monic normalization of the zero polynomial");
        self.scale(&lc.recip().unwrap())
    }

    /// Substitution `x := a*x + b` within the same symbol.
    pub fn compose_affine(&self, a: &ExactScalar, b: &ExactScalar) -> Self {
        let inner = Self::new(self.sym, vec![b.clone(), a.clone()]);
        self.compose_poly(&inner)
    }

    /// Substitution of an arbitrary inner polynomial (Horner form).
    pub fn compose_poly(&self, inner: &UniPoly) -> Self {
        let mut acc = Self::zero(inner.sym);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(inner.sym, c.clone());
        }
        acc
    }

    /// Quotient and remainder; panics if `div` is zero.
    pub fn div_rem(&self, div: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let lc = div.leading_coeff();
        let mut rem = self.clone();
        let qlen = (self.coeffs.len() + 1).saturating_sub(div.coeffs.len());
        let mut q = vec![ExactScalar::zero(); qlen];
        while !rem.is_zero() && rem.coeffs.len() >= div.coeffs.len() {
            let k = rem.coeffs.len() - div.coeffs.len();
            let c = &rem.leading_coeff() / &lc;
            q[k] = c.clone();
            let mut shifted = vec![ExactScalar::zero(); k];
            shifted.extend(div.scale(&c).coeffs);
            rem = &rem - &UniPoly::new(self.sym, shifted);
        }
        (UniPoly::new(self.sym, q), rem)
    }

    /// Exact division; `None` when the remainder is nonzero.
    pub fn exact_div(&self, div: &UniPoly) -> Option<UniPoly> {
        if self.is_zero() {
            return Some(Self::zero(self.sym));
        }
        if div.is_zero() || self.degree() < div.degree() {
            return None;
        }
        let (q, r) = self.div_rem(div);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
}

/// Monic greatest common divisor; gcd(0, 0) = 0.
pub fn gcd_unipoly(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y);
        x = y;
        y = r;
    }
    if x.is_zero() {
        x
    } else {
        x.monic()
    }
}

/// The rising-factorial polynomial `(x + shift)(x + shift + 1) ... `,
/// of the given length, in symbol `t`; length 0 gives the constant 1.
pub fn pochhammer_poly(shift: &ExactScalar, length: u32) -> UniPoly {
    let mut acc = UniPoly::one(Symbol::T);
    for i in 0..length {
        let root = shift + &ExactScalar::int(i as i64);
        acc = &acc * &UniPoly::linear(Symbol::T, root);
    }
    acc
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) + &rhs.coeff(k));
        }
        UniPoly::new(self.sym, coeffs)
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) - &rhs.coeff(k));
        }
        UniPoly::new(self.sym, coeffs)
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.sym);
        }
        let mut coeffs = vec![ExactScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        UniPoly::new(self.sym, coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            sym: self.sym,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var = self.sym.as_str();
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{var}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
