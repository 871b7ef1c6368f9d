//! Bivariate polynomials in the symbols `u` and `s`.
//!
//! The gcd treats a polynomial as univariate in `s` over the fraction field
//! of polynomials in `u`, with content extraction at every step. That is
//! deterministic and exact, and entirely adequate for the small degrees
//! handled here.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{binomial_big, ExactScalar};
use crate::unipoly::{gcd_unipoly, Symbol, UniPoly};

/// The two symbols of a [`BiPoly`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    S,
}

/// Bivariate polynomial; the map never stores zero coefficients and is keyed
/// by `(deg_u, deg_s)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), ExactScalar>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        let mut p = Self::zero();
        p.insert((0, 0), c);
        p
    }

    pub fn var_u() -> Self {
        let mut p = Self::zero();
        p.insert((1, 0), ExactScalar::one());
        p
    }

    pub fn var_s() -> Self {
        let mut p = Self::zero();
        p.insert((0, 1), ExactScalar::one());
        p
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), ExactScalar)>,
    {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn insert(&mut self, key: (u32, u32), c: ExactScalar) {
        if !c.is_zero() {
            self.terms.insert(key, c);
        }
    }

    fn add_term(&mut self, key: (u32, u32), c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: (u32, u32)) -> ExactScalar {
        self.terms.get(&key).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn deg_u(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn deg_s(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    /// Leading term under graded-lex order (total degree, then `u`-degree).
    pub fn glex_leading(&self) -> Option<((u32, u32), ExactScalar)> {
        self.terms
            .iter()
            .max_by_key(|(&(i, j), _)| (i + j, i))
            .map(|(&k, c)| (k, c.clone()))
    }

    pub fn scale(&self, k: &ExactScalar) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(&key, c)| (key, c * k)).collect(),
        }
    }

    pub fn eval(&self, u0: &ExactScalar, s0: &ExactScalar) -> ExactScalar {
        // Horner in u over Horner-evaluated s-slices.
        let rows = self.u_coeffs_in_s();
        let mut acc = ExactScalar::zero();
        for row in rows.iter().rev() {
            acc = &(&acc * u0) + &row.eval(s0);
        }
        acc
    }

    /// Partial evaluation `u := u0`, leaving a polynomial in `s`.
    pub fn eval_u(&self, u0: &ExactScalar) -> UniPoly {
        let mut coeffs = vec![ExactScalar::zero(); self.deg_s() as usize + 1];
        for (&(i, j), c) in &self.terms {
            coeffs[j as usize] = &coeffs[j as usize] + &(c * &u0.pow(i as i32));
        }
        UniPoly::new(Symbol::S, coeffs)
    }

    /// Partial evaluation `s := s0`, leaving a polynomial in `u`.
    pub fn eval_s(&self, s0: &ExactScalar) -> UniPoly {
        let mut coeffs = vec![ExactScalar::zero(); self.deg_u() as usize + 1];
        for (&(i, j), c) in &self.terms {
            coeffs[i as usize] = &coeffs[i as usize] + &(c * &s0.pow(j as i32));
        }
        UniPoly::new(Symbol::U, coeffs)
    }

    /// Integer shift of one variable, e.g. `u := u + delta`.
    pub fn shift(&self, var: Var, delta: i64) -> Self {
        if delta == 0 || self.is_zero() {
            return self.clone();
        }
        let d = ExactScalar::int(delta);
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let e = match var {
                Var::U => i,
                Var::S => j,
            };
            // (x + delta)^e expanded binomially
            for k in 0..=e {
                let b = ExactScalar::from_bigint(binomial_big(e as u64, k as u64));
                let coef = &(c * &b) * &d.pow((e - k) as i32);
                let key = match var {
                    Var::U => (k, j),
                    Var::S => (i, k),
                };
                out.add_term(key, coef);
            }
        }
        out
    }

    pub fn shift_u(&self, delta: i64) -> Self {
        self.shift(Var::U, delta)
    }

    pub fn shift_s(&self, delta: i64) -> Self {
        self.shift(Var::S, delta)
    }

    /// Substitution `s := k*u + c`, leaving a polynomial in `u` only.
    pub fn subst_s_affine_u(&self, k: &ExactScalar, c: &ExactScalar) -> Self {
        let lin = {
            let mut p = Self::zero();
            p.insert((1, 0), k.clone());
            p.add_term((0, 0), c.clone());
            p
        };
        let mut powers = vec![Self::one()];
        for j in 1..=self.deg_s() {
            let next = &powers[j as usize - 1] * &lin;
            powers.push(next);
        }
        let mut out = Self::zero();
        for (&(i, j), coef) in &self.terms {
            let mut term = powers[j as usize].scale(coef);
            term = term.mul_monomial(i, 0);
            out = &out + &term;
        }
        out
    }

    fn mul_monomial(&self, du: u32, ds: u32) -> Self {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + du, j + ds), c.clone()))
                .collect(),
        }
    }

    /// Builds `p(cu*u + cs*s + c0)` from a univariate polynomial.
    pub fn from_unipoly_subst(p: &UniPoly, cu: i64, cs: i64, c0: &ExactScalar) -> Self {
        let mut lin = Self::zero();
        lin.insert((1, 0), ExactScalar::int(cu));
        lin.insert((0, 1), ExactScalar::int(cs));
        lin.add_term((0, 0), c0.clone());
        if p.is_zero() {
            return Self::zero();
        }
        let mut acc = Self::zero();
        for k in (0..=p.degree()).rev() {
            acc = &(&acc * &lin) + &Self::constant(p.coeff(k));
        }
        acc
    }

    /// A polynomial in `u` alone, as a univariate polynomial.
    pub fn to_unipoly_u(&self) -> Option<UniPoly> {
        if self.deg_s() != 0 {
            return None;
        }
        let mut coeffs = vec![ExactScalar::zero(); self.deg_u() as usize + 1];
        for (&(i, _), c) in &self.terms {
            coeffs[i as usize] = c.clone();
        }
        Some(UniPoly::new(Symbol::U, coeffs))
    }

    /// A polynomial in `s` alone, as a univariate polynomial.
    pub fn to_unipoly_s(&self) -> Option<UniPoly> {
        if self.deg_u() != 0 {
            return None;
        }
        let mut coeffs = vec![ExactScalar::zero(); self.deg_s() as usize + 1];
        for (&(_, j), c) in &self.terms {
            coeffs[j as usize] = c.clone();
        }
        Some(UniPoly::new(Symbol::S, coeffs))
    }

    /// Coefficients of powers of `s`, each a polynomial in `u`.
    pub fn s_coeffs_in_u(&self) -> Vec<UniPoly> {
        let mut rows =
            vec![vec![ExactScalar::zero(); self.deg_u() as usize + 1]; self.deg_s() as usize + 1];
        for (&(i, j), c) in &self.terms {
            rows[j as usize][i as usize] = c.clone();
        }
        rows.into_iter().map(|r| UniPoly::new(Symbol::U, r)).collect()
    }

    /// Coefficients of powers of `u`, each a polynomial in `s`.
    pub fn u_coeffs_in_s(&self) -> Vec<UniPoly> {
        let mut rows =
            vec![vec![ExactScalar::zero(); self.deg_s() as usize + 1]; self.deg_u() as usize + 1];
        for (&(i, j), c) in &self.terms {
            rows[i as usize][j as usize] = c.clone();
        }
        rows.into_iter().map(|r| UniPoly::new(Symbol::S, r)).collect()
    }

    pub fn from_s_coeffs(rows: Vec<UniPoly>) -> Self {
        let mut out = Self::zero();
        for (j, row) in rows.iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                out.add_term((i as u32, j as u32), c.clone());
            }
        }
        out
    }

    pub fn from_u_coeffs(rows: Vec<UniPoly>) -> Self {
        let mut out = Self::zero();
        for (i, row) in rows.iter().enumerate() {
            for (j, c) in row.coeffs().iter().enumerate() {
                out.add_term((i as u32, j as u32), c.clone());
            }
        }
        out
    }

    /// Content as a polynomial in `s` with `u`-polynomial coefficients:
    /// the monic gcd of the `s`-slices.
    pub fn content_in_u(&self) -> UniPoly {
        let mut g = UniPoly::zero(Symbol::U);
        for row in self.s_coeffs_in_u() {
            g = gcd_unipoly(&g, &row);
        }
        g
    }

    /// Content as a polynomial in `u` with `s`-polynomial coefficients.
    pub fn content_in_s(&self) -> UniPoly {
        let mut g = UniPoly::zero(Symbol::S);
        for row in self.u_coeffs_in_s() {
            g = gcd_unipoly(&g, &row);
        }
        g
    }

    /// Canonical representative with coprime integer coefficients and a
    /// positive graded-lex leading coefficient. Returns `(canonical, factor)`
    /// with `self = factor * canonical`; the zero polynomial yields factor 1.
    pub fn content_normalized(&self) -> (BiPoly, ExactScalar) {
        if self.is_zero() {
            return (Self::zero(), ExactScalar::one());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut factor = ExactScalar::from_parts(num_gcd, den_lcm).expect("nonzero content");
        let (_, lead) = self.glex_leading().expect("nonzero polynomial");
        if lead.is_negative() {
            factor = -factor;
        }
        let inv = factor.recip().expect("nonzero factor");
        (self.scale(&inv), factor)
    }

    /// Exact division in `Q[u, s]`; `None` when not exactly divisible.
    pub fn exact_div(&self, div: &BiPoly) -> Option<BiPoly> {
        assert!(!div.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if div.is_constant() {
            let c = div.coeff((0, 0));
            return Some(self.scale(&c.recip().expect("nonzero constant divisor")));
        }
        // Long division in s with coefficients in Q[u]; each leading-coefficient
        // division must itself be exact.
        let a = self.s_coeffs_in_u();
        let b = div.s_coeffs_in_u();
        let db = b.len() - 1;
        let blead = &b[db];
        let mut rem = a;
        let mut quot: Vec<UniPoly> = Vec::new();
        loop {
            while rem.last().map_or(false, |r| r.is_zero()) {
                rem.pop();
            }
            if rem.is_empty() {
                break;
            }
            let dr = rem.len() - 1;
            if dr < db {
                return None;
            }
            let qcoef = rem[dr].exact_div(blead)?;
            let k = dr - db;
            for (j, bj) in b.iter().enumerate() {
                let sub = &(bj * &qcoef);
                rem[j + k] = &rem[j + k] - sub;
            }
            while quot.len() <= k {
                quot.push(UniPoly::zero(Symbol::U));
            }
            quot[k] = qcoef;
        }
        Some(Self::from_s_coeffs(quot))
    }

    /// Greatest common divisor, content-normalized with positive graded-lex
    /// leading coefficient. gcd with zero is the other argument normalized.
    pub fn gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
        if a.is_zero() {
            return b.content_normalized().0;
        }
        if b.is_zero() {
            return a.content_normalized().0;
        }
        let ca = a.content_in_u();
        let cb = b.content_in_u();
        let pa = a.primitive_in_u(&ca);
        let pb = b.primitive_in_u(&cb);
        let content_gcd = gcd_unipoly(&ca, &cb);
        let prim_gcd = Self::primitive_gcd(pa, pb);
        let content_bip = Self::from_u_unipoly(&content_gcd);
        (&content_bip * &prim_gcd).content_normalized().0
    }

    fn from_u_unipoly(p: &UniPoly) -> BiPoly {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term((i as u32, 0), c.clone());
        }
        out
    }

    fn primitive_in_u(&self, content: &UniPoly) -> Vec<UniPoly> {
        self.s_coeffs_in_u()
            .into_iter()
            .map(|row| {
                if row.is_zero() {
                    row
                } else {
                    row.exact_div(content).expect("content divides every slice")
                }
            })
            .collect()
    }

    /// Euclid on s-degree over Q(u), taking primitive parts at each step.
    fn primitive_gcd(mut x: Vec<UniPoly>, mut y: Vec<UniPoly>) -> BiPoly {
        let trim = |v: &mut Vec<UniPoly>| {
            while v.last().map_or(false, |r| r.is_zero()) {
                v.pop();
            }
        };
        trim(&mut x);
        trim(&mut y);
        loop {
            if y.is_empty() {
                let g = Self::from_s_coeffs(x);
                return g.content_normalized().0;
            }
            if x.len() < y.len() {
                std::mem::swap(&mut x, &mut y);
                continue;
            }
            if y.len() == 1 {
                // A nonzero u-polynomial divides every s-slice only through
                // content, which was already removed.
                return Self::one();
            }
            // Pseudo-remainder: lc(y)^(dx-dy+1) * x mod y.
            let dy = y.len() - 1;
            let ylead = y[dy].clone();
            let mut rem = x.clone();
            let steps = rem.len() - y.len() + 1;
            for _ in 0..steps {
                trim(&mut rem);
                if rem.len() < y.len() {
                    break;
                }
                let dr = rem.len() - 1;
                let k = dr - dy;
                let rlead = rem[dr].clone();
                for slot in rem.iter_mut() {
                    *slot = &*slot * &ylead;
                }
                for (j, yj) in y.iter().enumerate() {
                    rem[j + k] = &rem[j + k] - &(yj * &rlead);
                }
            }
            trim(&mut rem);
            // Strip u-content so coefficients stay small.
            if !rem.is_empty() {
                let mut c = UniPoly::zero(Symbol::U);
                for r in &rem {
                    c = gcd_unipoly(&c, r);
                }
                if !c.is_one() {
                    rem = rem
                        .into_iter()
                        .map(|r| if r.is_zero() { r } else { r.exact_div(&c).unwrap() })
                        .collect();
                }
            }
            x = y;
            y = rem;
        }
    }
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, -c);
        }
        out
    }
}

impl Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl fmt::Display for BiPoly {
    /// Canonical printing: graded-lex descending, explicit `*`, rationals as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().cloned().collect();
        keys.sort_by_key(|&(i, j)| (std::cmp::Reverse(i + j), std::cmp::Reverse(i)));
        let mut first = true;
        for key in keys {
            let c = &self.terms[&key];
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
            let (i, j) = key;
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                parts.push(mag.to_string());
            }
            if i == 1 {
                parts.push("u".into());
            } else if i > 1 {
                parts.push(format!("u^{i}"));
            }
            if j == 1 {
                parts.push("s".into());
            } else if j > 1 {
                parts.push(format!("s^{j}"));
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
