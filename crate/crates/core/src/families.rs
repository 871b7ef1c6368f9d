//! The five quasi-orthogonal families whose coefficient-ratio function has an
//! `s`-only denominator, their three independent generators, closed-form
//! recurrence coefficients, moment functional and Gram matrix.
//!
//! Every family is handled in its monic normalization. A rescale factor `r`
//! acts by `P_n(z) -> r^{-n} P_n(r z)`, multiplies the ratio function by `r`,
//! and divides the recurrence coefficients `alpha` and `beta` by `r` and
//! `r^2` respectively.

use thiserror::Error;

use crate::bipoly::BiPoly;
use crate::birat::{reduce, BiRat};
use crate::error::ExactError;
use crate::scalar::ExactScalar;
use crate::unipoly::{Symbol, UniPoly};

/// Errors raised by family construction and verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {reason}")]
    InvalidParams { reason: String },
    #[error("leading series coefficient vanishes at degree {n}")]
    LeadingZero { n: usize },
    #[error("ratio function vanishes at (n, i) = ({n}, {i})")]
    RatioVanishes { n: usize, i: usize },
    #[error("ratio function has a pole at (n, i) = ({n}, {i})")]
    RatioPole { n: usize, i: usize },
    #[error("recurrence coefficient beta({n}) vanishes; the family is not quasi-orthogonal at this index")]
    BetaVanishes { n: usize },
    #[error("polynomial triple does not satisfy a three-term relation")]
    NotThreeTerm,
    #[error("insufficient data: need {needed} entries, got {got}")]
    InsufficientMoments { needed: usize, got: usize },
    #[error("closed-form evaluation failed at n = {n}: {source}")]
    ClosedFormEval { n: usize, source: ExactError },
}

/// Which of the five families, with its exact parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    Jacobi { a: ExactScalar, b: ExactScalar },
    Laguerre { b: ExactScalar },
    Bessel { a: ExactScalar },
    E { c: ExactScalar },
    F { c: ExactScalar },
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Jacobi { .. } => "jacobi",
            FamilyKind::Laguerre { .. } => "laguerre",
            FamilyKind::Bessel { .. } => "bessel",
            FamilyKind::E { .. } => "e",
            FamilyKind::F { .. } => "f",
        }
    }
}

/// A family descriptor: the kind plus the rescale factor `z -> rescale * z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub rescale: ExactScalar,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, rescale: ExactScalar) -> Result<Self, FamilyError> {
        if rescale.is_zero() {
            return Err(FamilyError::InvalidParams { reason: "rescale must be nonzero".into() });
        }
        Ok(FamilySpec { kind, rescale })
    }

    pub fn plain(kind: FamilyKind) -> Self {
        FamilySpec { kind, rescale: ExactScalar::one() }
    }

    pub fn jacobi(a: ExactScalar, b: ExactScalar) -> Self {
        Self::plain(FamilyKind::Jacobi { a, b })
    }

    pub fn laguerre(b: ExactScalar) -> Self {
        Self::plain(FamilyKind::Laguerre { b })
    }

    pub fn bessel(a: ExactScalar) -> Self {
        Self::plain(FamilyKind::Bessel { a })
    }

    pub fn family_e(c: ExactScalar) -> Self {
        Self::plain(FamilyKind::E { c })
    }

    pub fn family_f(c: ExactScalar) -> Self {
        Self::plain(FamilyKind::F { c })
    }

    pub fn with_rescale(mut self, rescale: ExactScalar) -> Self {
        self.rescale = rescale;
        self
    }

    /// Parameter domain on which every coefficient `c(n, k)` exists and is
    /// nonzero, so all three generators are defined.
    pub fn is_definable(&self) -> bool {
        if self.rescale.is_zero() {
            return false;
        }
        match &self.kind {
            FamilyKind::Jacobi { a, b } => {
                !a.is_negative_integer() && !b.is_nonpositive_integer()
            }
            FamilyKind::Laguerre { b } => !b.is_nonpositive_integer(),
            FamilyKind::Bessel { a } => !a.is_negative_integer(),
            FamilyKind::E { c } | FamilyKind::F { c } => !c.is_nonpositive_integer(),
        }
    }

    /// Quasi-orthogonality: definable and every actual recurrence
    /// coefficient `beta_n` nonzero. Only the Jacobi kind needs the extra
    /// `a - b` condition.
    pub fn is_quasi_orthogonal(&self) -> bool {
        if !self.is_definable() {
            return false;
        }
        match &self.kind {
            FamilyKind::Jacobi { a, b } => !(a - b).is_negative_integer(),
            _ => true,
        }
    }

    /// Orthogonality with respect to a positive measure (real parameters,
    /// all `beta_n > 0`). Comparisons are exact on rationals.
    pub fn is_orthogonal(&self) -> bool {
        if !self.is_quasi_orthogonal() {
            return false;
        }
        match &self.kind {
            FamilyKind::Jacobi { a, b } => a > &(b - &ExactScalar::one()) && b.is_positive(),
            FamilyKind::Laguerre { b } => b.is_positive(),
            FamilyKind::Bessel { .. } => false,
            FamilyKind::E { c } => c.is_positive(),
            FamilyKind::F { c } => c > &ExactScalar::int(-1) && !c.is_zero(),
        }
    }

    pub fn validate_definable(&self) -> Result<(), FamilyError> {
        if self.is_definable() {
            return Ok(());
        }
        let reason = if self.rescale.is_zero() {
            "rescale must be nonzero".to_string()
        } else {
            match &self.kind {
                FamilyKind::Jacobi { .. } => {
                    "jacobi requires a not a negative integer and b not a non-positive integer"
                        .to_string()
                }
                FamilyKind::Laguerre { .. } => {
                    "laguerre requires b not a non-positive integer".to_string()
                }
                FamilyKind::Bessel { .. } => {
                    "bessel requires a not a negative integer".to_string()
                }
                FamilyKind::E { .. } => "family e requires c not a non-positive integer".to_string(),
                FamilyKind::F { .. } => "family f requires c not a non-positive integer".to_string(),
            }
        };
        Err(FamilyError::InvalidParams { reason })
    }

    /// The `(p, q, w)` table defining the ratio function
    /// `f = rescale * q(s+u) p(s-u) / w(s)`; `p` and `q` in `t`, `w` in `s`.
    pub fn pqw(&self) -> (UniPoly, UniPoly, UniPoly) {
        let t = Symbol::T;
        let s = Symbol::S;
        let one = ExactScalar::one();
        let lin = |sym, c: ExactScalar| UniPoly::linear(sym, c);
        match &self.kind {
            FamilyKind::Jacobi { a, b } => (
                UniPoly::var(t),
                lin(t, a.clone()),
                &lin(s, one) * &lin(s, b.clone()),
            ),
            FamilyKind::Laguerre { b } => (
                UniPoly::var(t),
                UniPoly::one(t),
                &lin(s, one) * &lin(s, b.clone()),
            ),
            FamilyKind::Bessel { a } => (UniPoly::var(t), lin(t, a.clone()), lin(s, one)),
            FamilyKind::E { c } => (
                &UniPoly::var(t) * &lin(t, &one - c),
                &lin(t, one.clone()) * &lin(t, c.clone()),
                &lin(s, one) * &lin(s, ExactScalar::ratio(1, 2)),
            ),
            FamilyKind::F { c } => (
                &UniPoly::var(t) * &lin(t, &one - c),
                &lin(t, ExactScalar::int(2)) * &lin(t, c + &one),
                &lin(s, one) * &lin(s, ExactScalar::ratio(3, 2)),
            ),
        }
    }

    /// Upper and lower series parameters at degree `n`: the coefficients obey
    /// `c_{k+1}/c_k = prod(upper + k) / (prod(lower + k) (k+1))`.
    pub fn series_params(&self, n: usize) -> (Vec<ExactScalar>, Vec<ExactScalar>) {
        let n_s = ExactScalar::int(n as i64);
        let one = ExactScalar::one();
        match &self.kind {
            FamilyKind::Jacobi { a, b } => (vec![-&n_s, &n_s + a], vec![b.clone()]),
            FamilyKind::Laguerre { b } => (vec![-&n_s], vec![b.clone()]),
            FamilyKind::Bessel { a } => (vec![-&n_s, &n_s + a], vec![]),
            FamilyKind::E { c } => (
                vec![-&n_s, &(&one - &n_s) - c, &n_s + &one, &n_s + c],
                vec![ExactScalar::ratio(1, 2)],
            ),
            FamilyKind::F { c } => (
                vec![-&n_s, &(&one - &n_s) - c, &n_s + &ExactScalar::int(2), &(&n_s + c) + &one],
                vec![ExactScalar::ratio(3, 2)],
            ),
        }
    }

    /// The coefficient-ratio function `f(u, s)` with
    /// `c(n, k+1) = f(n, k) c(n, k)`, reduced. Its numerator is divisible by
    /// `u - s` and its denominator by `s + 1`.
    pub fn coefficient_ratio(&self) -> Result<BiRat, FamilyError> {
        self.validate_definable()?;
        let (p, q, w) = self.pqw();
        let zero = ExactScalar::zero();
        let q_us = BiPoly::from_unipoly_subst(&q, 1, 1, &zero);
        let p_us = BiPoly::from_unipoly_subst(&p, -1, 1, &zero);
        let w_s = BiPoly::from_unipoly_subst(&w, 0, 1, &zero);
        let num = (&q_us * &p_us).scale(&self.rescale);
        reduce(num, w_s).map_err(|e| FamilyError::InvalidParams { reason: e.to_string() })
    }

    /// Constant term of the monic `P_1`, equal to `1/f(1, 0)`.
    pub fn c0(&self) -> Result<ExactScalar, FamilyError> {
        self.validate_definable()?;
        let (p, q, w) = self.pqw();
        let one = ExactScalar::one();
        let w0 = w.eval(&ExactScalar::zero());
        let q1 = q.eval(&one);
        let pm1 = p.eval(&ExactScalar::int(-1));
        let den = &(&self.rescale * &q1) * &pm1;
        if den.is_zero() {
            return Err(FamilyError::InvalidParams {
                reason: "ratio function vanishes at (1, 0)".into(),
            });
        }
        Ok(&w0 / &den)
    }

    /// Closed-form recurrence coefficients `alpha(u)` and `beta(u)` as
    /// rational functions of `u`, adjusted for the rescale factor.
    ///
    /// The table entries are re-derived on every call from the ratio
    /// function via the elimination identities and the two routes are
    /// compared; a mismatch is a bug and panics.
    pub fn closed_alpha_beta(&self) -> Result<(BiRat, BiRat), FamilyError> {
        self.validate_definable()?;
        let (alpha, beta) = self.alpha_beta_table();
        let r_inv = BiRat::from_scalar(self.rescale.recip().expect("nonzero rescale"));
        let alpha = &alpha * &r_inv;
        let beta = &(&beta * &r_inv) * &r_inv;
        let f = self.coefficient_ratio()?;
        let (alpha_derived, beta_derived) = alpha_beta_from_ratio(&f)
            .map_err(|e| FamilyError::InvalidParams { reason: e.to_string() })?;
        assert_eq!(alpha, alpha_derived, "alpha table entry disagrees with derivation");
        assert_eq!(beta, beta_derived, "beta table entry disagrees with derivation");
        Ok((alpha, beta))
    }

    /// Raw table of closed `alpha` and `beta` at rescale 1.
    fn alpha_beta_table(&self) -> (BiRat, BiRat) {
        let u = |c: ExactScalar| -> UniPoly { UniPoly::linear(Symbol::U, c) };
        let two_u = |c: ExactScalar| -> UniPoly {
            UniPoly::new(Symbol::U, vec![c, ExactScalar::int(2)])
        };
        let upoly_rat = |num: UniPoly, den: UniPoly| -> BiRat {
            let zero = ExactScalar::zero();
            reduce(
                BiPoly::from_unipoly_subst(&num, 1, 0, &zero),
                BiPoly::from_unipoly_subst(&den, 1, 0, &zero),
            )
            .expect("nonzero denominator")
        };
        let one = ExactScalar::one();
        match &self.kind {
            FamilyKind::Jacobi { a, b } => {
                // alpha = (2u^2 + 2au + b(a-1)) / ((2u+a-1)(2u+a+1))
                let alpha_num = UniPoly::new(
                    Symbol::U,
                    vec![b * &(a - &one), a + a, ExactScalar::int(2)],
                );
                let alpha_den = &two_u(a - &one) * &two_u(a + &one);
                // beta = u(u+a-1)(u+b-1)(u+a-b) / ((2u+a)(2u+a-1)^2(2u+a-2))
                let beta_num = &(&(&UniPoly::var(Symbol::U) * &u(&(a - &one) * &one))
                    * &u(b - &one))
                    * &u(a - b);
                let beta_den = &(&(&two_u(a.clone()) * &two_u(a - &one)) * &two_u(a - &one))
                    * &two_u(a - &ExactScalar::int(2));
                (upoly_rat(alpha_num, alpha_den), upoly_rat(beta_num, beta_den))
            }
            FamilyKind::Laguerre { b } => {
                let alpha = upoly_rat(two_u(b.clone()), UniPoly::one(Symbol::U));
                let beta = upoly_rat(
                    &UniPoly::var(Symbol::U) * &u(b - &one),
                    UniPoly::one(Symbol::U),
                );
                (alpha, beta)
            }
            FamilyKind::Bessel { a } => {
                let alpha = upoly_rat(
                    UniPoly::constant(Symbol::U, a - &one),
                    &two_u(a - &one) * &two_u(a + &one),
                );
                let beta = upoly_rat(
                    -&(&UniPoly::var(Symbol::U) * &u(a - &one)),
                    &(&(&two_u(a.clone()) * &two_u(a - &one)) * &two_u(a - &one))
                        * &two_u(a - &ExactScalar::int(2)),
                );
                (alpha, beta)
            }
            FamilyKind::E { c } => {
                let alpha = upoly_rat(
                    UniPoly::constant(Symbol::U, ExactScalar::ratio(-1, 2)),
                    &two_u(c - &one) * &two_u(c + &one),
                );
                let beta = upoly_rat(
                    UniPoly::constant(Symbol::U, ExactScalar::ratio(1, 16)),
                    &(&(&two_u(c.clone()) * &two_u(c - &one)) * &two_u(c - &one))
                        * &two_u(c - &ExactScalar::int(2)),
                );
                (alpha, beta)
            }
            FamilyKind::F { c } => {
                let alpha = upoly_rat(
                    UniPoly::constant(Symbol::U, ExactScalar::ratio(-1, 2)),
                    &two_u(c.clone()) * &two_u(c + &ExactScalar::int(2)),
                );
                let beta = upoly_rat(
                    UniPoly::constant(Symbol::U, ExactScalar::ratio(1, 16)),
                    &(&(&two_u(c + &one) * &two_u(c.clone())) * &two_u(c.clone()))
                        * &two_u(c - &one),
                );
                (alpha, beta)
            }
        }
    }
}

/// Derives `alpha(u)` and `beta(u)` from the ratio function alone:
/// `alpha(u) = f(u, u-1)^{-1} - f(u+1, u)^{-1}` and the companion
/// four-term expression for `beta(u)`.
pub fn alpha_beta_from_ratio(f: &BiRat) -> Result<(BiRat, BiRat), ExactError> {
    let one = ExactScalar::one();
    let at = |g: &BiRat, du: i64, offset: i64| -> Result<BiRat, ExactError> {
        g.shift_u(du).subst_s_affine_u(&one, &ExactScalar::int(offset))
    };
    let f_u_um1 = at(f, 0, -1)?.recip()?; // f(u, u-1)^{-1}
    let f_u_um2 = at(f, 0, -2)?.recip()?; // f(u, u-2)^{-1}
    let f_u1_u = at(f, 1, 0)?.recip()?; // f(u+1, u)^{-1}
    let f_u1_um1 = at(f, 1, -1)?.recip()?; // f(u+1, u-1)^{-1}
    let alpha = &f_u_um1 - &f_u1_u;
    let beta = &(&(&(&f_u_um2 * &f_u_um1) - &(&f_u1_um1 * &f_u1_u)) - &(&f_u_um1 * &f_u_um1))
        + &(&f_u_um1 * &f_u1_u);
    Ok((alpha, beta))
}

/// `beta_1` computed pointwise from the ratio function; valid for every
/// definable family, including the two parameter points where it differs
/// from the closed-form `beta(1)`.
pub fn beta_one_from_ratio(f: &BiRat) -> Result<ExactScalar, FamilyError> {
    let ev = |n: i64, k: i64| -> Result<ExactScalar, FamilyError> {
        f.eval(&ExactScalar::int(n), &ExactScalar::int(k))
            .map_err(|e| FamilyError::ClosedFormEval { n: n as usize, source: e })
    };
    let f10 = ev(1, 0)?;
    let f21 = ev(2, 1)?;
    let f20 = ev(2, 0)?;
    let inv = |x: ExactScalar, n: usize, i: usize| {
        x.recip().map_err(|_| FamilyError::RatioVanishes { n, i })
    };
    let i10 = inv(f10, 1, 0)?;
    let i21 = inv(f21, 2, 1)?;
    let i20 = inv(f20, 2, 0)?;
    // beta_1 = f(1,0)^{-1} f(2,1)^{-1} - f(1,0)^{-2} - f(2,0)^{-1} f(2,1)^{-1}
    Ok(&(&(&i10 * &i21) - &(&i10 * &i10)) - &(&i20 * &i21))
}

/// Provenance of a generated polynomial sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Series,
    RatioProduct,
    Recurrence,
    Gauge,
    Lommel,
}

/// A finite sequence of monic polynomials in `z`, indexed by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySeq {
    pub polys: Vec<UniPoly>,
    pub provenance: Provenance,
}

impl PolySeq {
    pub fn new(polys: Vec<UniPoly>, provenance: Provenance) -> Self {
        for (n, p) in polys.iter().enumerate() {
            debug_assert_eq!(p.degree(), n, "entry {n} must have exact degree {n}");
            debug_assert!(p.is_monic(), "entry {n} must be monic");
        }
        PolySeq { polys, provenance }
    }

    pub fn max_degree(&self) -> usize {
        self.polys.len().saturating_sub(1)
    }
}

/// Generation method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMethod {
    Series,
    Ratio,
    Recurrence,
}

/// The degree-`n` member by truncated series: the coefficients follow the
/// running ratio of the series parameters, then the polynomial is made monic
/// and the rescale is applied.
pub fn series_polynomial(spec: &FamilySpec, n: usize) -> Result<UniPoly, FamilyError> {
    spec.validate_definable()?;
    let (upper, lower) = spec.series_params(n);
    let raw = truncated_pfq(&upper, &lower, n)?;
    let lc = raw.coeff(n);
    if lc.is_zero() {
        return Err(FamilyError::LeadingZero { n });
    }
    let monic = raw.scale(&lc.recip().expect("nonzero leading coefficient"));
    Ok(apply_rescale(&monic, &spec.rescale, n))
}

/// Truncated hypergeometric-style sum `sum_k prod(upper)_k / (prod(lower)_k k!) z^k`
/// up to degree `n`, built from the running term recurrence.
pub fn truncated_pfq(
    upper: &[ExactScalar],
    lower: &[ExactScalar],
    n: usize,
) -> Result<UniPoly, FamilyError> {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = ExactScalar::one();
    coeffs.push(c.clone());
    for k in 0..n {
        let k_s = ExactScalar::int(k as i64);
        let mut num = ExactScalar::one();
        for g in upper {
            num = &num * &(g + &k_s);
        }
        let mut den = ExactScalar::int(k as i64 + 1);
        for d in lower {
            let factor = d + &k_s;
            if factor.is_zero() {
                return Err(FamilyError::InvalidParams {
                    reason: format!("lower parameter {d} hits zero at index {k}"),
                });
            }
            den = &den * &factor;
        }
        c = &(&c * &num) / &den;
        coeffs.push(c.clone());
    }
    Ok(UniPoly::new(Symbol::Z, coeffs))
}

/// `P(z) -> rescale^{-n} P(rescale * z)` on a degree-`n` polynomial.
fn apply_rescale(p: &UniPoly, rescale: &ExactScalar, n: usize) -> UniPoly {
    if rescale.is_one() {
        return p.clone();
    }
    let coeffs = (0..=n)
        .map(|k| &p.coeff(k) * &rescale.pow(k as i32 - n as i32))
        .collect();
    UniPoly::new(Symbol::Z, coeffs)
}

/// Coefficients `c(n, 0..=n)` from the ratio function by the descending
/// product, with `c(n, n) = 1`.
pub fn coefficients_from_ratio(f: &BiRat, n: usize) -> Result<Vec<ExactScalar>, FamilyError> {
    let mut coeffs = vec![ExactScalar::zero(); n + 1];
    coeffs[n] = ExactScalar::one();
    let n_s = ExactScalar::int(n as i64);
    for i in (0..n).rev() {
        let value = match f.eval(&n_s, &ExactScalar::int(i as i64)) {
            Ok(v) => v,
            Err(ExactError::PoleAtPoint { .. }) | Err(ExactError::IndeterminateAtPoint { .. }) => {
                return Err(FamilyError::RatioPole { n, i });
            }
            Err(e) => {
                return Err(FamilyError::InvalidParams { reason: e.to_string() });
            }
        };
        if value.is_zero() {
            return Err(FamilyError::RatioVanishes { n, i });
        }
        coeffs[i] = &coeffs[i + 1] / &value;
    }
    Ok(coeffs)
}

/// Assembles ascending coefficients into a polynomial in `z`.
pub fn assemble(coeffs: Vec<ExactScalar>) -> UniPoly {
    UniPoly::new(Symbol::Z, coeffs)
}

/// Monic three-term generation `P_{n+1} = (z - alpha_n) P_n - beta_n P_{n-1}`
/// with `P_0 = 1`, `P_1 = z + c0`. Checks `beta(n) != 0` for `1 <= n < n_max`,
/// since quasi-orthogonality requires it.
pub fn recurrence_generate<A, B>(
    alpha: A,
    beta: B,
    c0: &ExactScalar,
    n_max: usize,
) -> Result<PolySeq, FamilyError>
where
    A: Fn(usize) -> ExactScalar,
    B: Fn(usize) -> ExactScalar,
{
    for n in 1..n_max {
        if beta(n).is_zero() {
            return Err(FamilyError::BetaVanishes { n });
        }
    }
    Ok(recurrence_generate_unchecked(alpha, beta, c0, n_max))
}

/// Same generation without the nonvanishing check on `beta`; a vanishing
/// value only means the family is not quasi-orthogonal at that index, the
/// sequence itself stays well-defined.
pub fn recurrence_generate_unchecked<A, B>(
    alpha: A,
    beta: B,
    c0: &ExactScalar,
    n_max: usize,
) -> PolySeq
where
    A: Fn(usize) -> ExactScalar,
    B: Fn(usize) -> ExactScalar,
{
    let z = UniPoly::var(Symbol::Z);
    let mut polys = vec![UniPoly::one(Symbol::Z)];
    if n_max >= 1 {
        polys.push(UniPoly::linear(Symbol::Z, c0.clone()));
    }
    for n in 1..n_max {
        let shifted = &(&z - &UniPoly::constant(Symbol::Z, alpha(n))) * &polys[n];
        let next = &shifted - &polys[n - 1].scale(&beta(n));
        polys.push(next);
    }
    PolySeq::new(polys, Provenance::Recurrence)
}

/// Generates `P_0 ..= P_{n_max}` by the chosen method.
pub fn generate(spec: &FamilySpec, n_max: usize, method: GenMethod) -> Result<PolySeq, FamilyError> {
    spec.validate_definable()?;
    match method {
        GenMethod::Series => {
            let polys = (0..=n_max)
                .map(|n| series_polynomial(spec, n))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PolySeq::new(polys, Provenance::Series))
        }
        GenMethod::Ratio => {
            let f = spec.coefficient_ratio()?;
            let polys = (0..=n_max)
                .map(|n| coefficients_from_ratio(&f, n).map(assemble))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PolySeq::new(polys, Provenance::RatioProduct))
        }
        GenMethod::Recurrence => {
            let (alpha, beta) = spec.closed_alpha_beta()?;
            let f = spec.coefficient_ratio()?;
            let beta1 = beta_one_from_ratio(&f)?;
            let c0 = spec.c0()?;
            let alpha_at = eval_u_fn(alpha)?;
            let beta_at = eval_u_fn(beta)?;
            let mut alphas = Vec::new();
            let mut betas = Vec::new();
            for n in 1..n_max.max(1) {
                alphas.push(alpha_at(n)?);
                betas.push(if n == 1 { beta1.clone() } else { beta_at(n)? });
            }
            Ok(recurrence_generate_unchecked(
                |n| alphas[n - 1].clone(),
                |n| betas[n - 1].clone(),
                &c0,
                n_max,
            ))
        }
    }
}

type EvalFn = Box<dyn Fn(usize) -> Result<ExactScalar, FamilyError>>;

fn eval_u_fn(g: BiRat) -> Result<EvalFn, FamilyError> {
    Ok(Box::new(move |n: usize| {
        g.eval_u_only(&ExactScalar::int(n as i64))
            .map_err(|e| FamilyError::ClosedFormEval { n, source: e })
    }))
}

/// The unique `(alpha_n, beta_n)` with
/// `z P_n = P_{n+1} + alpha_n P_n + beta_n P_{n-1}` for a monic triple of
/// degrees `n-1, n, n+1`; errors when no three-term relation holds.
pub fn actual_recurrence_coeffs(
    prev: &UniPoly,
    current: &UniPoly,
    next: &UniPoly,
) -> Result<(ExactScalar, ExactScalar), FamilyError> {
    let n = current.degree();
    if current.is_zero()
        || prev.is_zero() && n != 0
        || !prev.is_monic()
        || !current.is_monic()
        || !next.is_monic()
        || n == 0
        || prev.degree() != n - 1
        || next.degree() != n + 1
    {
        return Err(FamilyError::NotThreeTerm);
    }
    let z = UniPoly::var(Symbol::Z);
    let rem = &(&z * current) - next; // degree <= n
    let alpha = rem.coeff(n);
    let rem = &rem - &current.scale(&alpha);
    let beta = rem.coeff(n - 1);
    let rem = &rem - &prev.scale(&beta);
    if !rem.is_zero() {
        return Err(FamilyError::NotThreeTerm);
    }
    Ok((alpha, beta))
}

/// Moments `mu_0 ..= mu_k` of the functional normalized by `mu_0 = 1`,
/// obtained by tracking the expansion of `z^k` in the P-basis through the
/// recurrence, with the bookkeeping convention `alpha_0 := -c0`.
///
/// `alpha` and `beta` list the coefficients from index 1 upward; `ceil(k/2)`
/// entries of each suffice.
pub fn moments_from_recurrence(
    alpha: &[ExactScalar],
    beta: &[ExactScalar],
    c0: &ExactScalar,
    k_max: usize,
) -> Result<Vec<ExactScalar>, FamilyError> {
    let cap = k_max.div_ceil(2);
    if alpha.len() < cap || beta.len() < cap {
        return Err(FamilyError::InsufficientMoments {
            needed: cap,
            got: alpha.len().min(beta.len()),
        });
    }
    let alpha0 = -c0;
    let mut coords = vec![ExactScalar::zero(); cap + 1];
    coords[0] = ExactScalar::one();
    let mut moments = vec![ExactScalar::one()];
    for _ in 1..=k_max {
        let mut next = vec![ExactScalar::zero(); cap + 1];
        for (j, a) in coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if j + 1 <= cap {
                next[j + 1] = &next[j + 1] + a;
            }
            let aj = if j == 0 { alpha0.clone() } else { alpha[j - 1].clone() };
            next[j] = &next[j] + &(a * &aj);
            if j >= 1 {
                next[j - 1] = &next[j - 1] + &(a * &beta[j - 1]);
            }
        }
        coords = next;
        moments.push(coords[0].clone());
    }
    Ok(moments)
}

/// Gram matrix `Q_{ij} = M(P_i P_j)` from a moment list; needs moments up to
/// twice the maximal degree.
pub fn gram_matrix(
    seq: &PolySeq,
    moments: &[ExactScalar],
) -> Result<Vec<Vec<ExactScalar>>, FamilyError> {
    let dim = seq.polys.len();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let needed = 2 * (dim - 1) + 1;
    if moments.len() < needed {
        return Err(FamilyError::InsufficientMoments { needed, got: moments.len() });
    }
    let mut out = vec![vec![ExactScalar::zero(); dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let prod = &seq.polys[i] * &seq.polys[j];
            let mut acc = ExactScalar::zero();
            for (m, c) in prod.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc = &acc + &(c * &moments[m]);
                }
            }
            out[i][j] = acc.clone();
            out[j][i] = acc;
        }
    }
    Ok(out)
}

/// Moments of a family, using the actual recurrence coefficients extracted
/// from the generated sequence (these differ from the closed forms only at
/// the two documented exceptional parameter points).
pub fn family_moments(spec: &FamilySpec, k_max: usize) -> Result<Vec<ExactScalar>, FamilyError> {
    let cap = k_max.div_ceil(2);
    let seq = generate(spec, cap + 1, GenMethod::Series)?;
    let mut alphas = Vec::with_capacity(cap);
    let mut betas = Vec::with_capacity(cap);
    for n in 1..=cap {
        let (a, b) = actual_recurrence_coeffs(&seq.polys[n - 1], &seq.polys[n], &seq.polys[n + 1])?;
        alphas.push(a);
        betas.push(b);
    }
    let c0 = seq.polys.get(1).map(|p| p.coeff(0)).unwrap_or_else(ExactScalar::zero);
    moments_from_recurrence(&alphas, &betas, &c0, k_max)
}

/// Residual of the Euler-operator annihilator
/// `D prod_j (D + lower_j - 1) - z prod_l (D + upper_l)` applied to `p`,
/// where `D = z d/dz`. The result is the zero polynomial exactly when `p`
/// is a truncated series with these parameters, up to scalar.
pub fn euler_operator_residual(
    upper: &[ExactScalar],
    lower: &[ExactScalar],
    p: &UniPoly,
) -> UniPoly {
    let deg = p.degree();
    let mut coeffs = Vec::with_capacity(deg + 2);
    for k in 0..=deg + 1 {
        let k_s = ExactScalar::int(k as i64);
        let mut dterm = k_s.clone();
        for d in lower {
            dterm = &dterm * &(&(d + &k_s) - &ExactScalar::one());
        }
        dterm = &dterm * &p.coeff(k);
        let mut zterm = if k == 0 { ExactScalar::zero() } else { p.coeff(k - 1) };
        if k > 0 {
            let km1 = ExactScalar::int(k as i64 - 1);
            for g in upper {
                zterm = &zterm * &(g + &km1);
            }
        }
        coeffs.push(&dterm - &zterm);
    }
    UniPoly::new(Symbol::Z, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    fn poly(coeffs: &[(i64, i64)]) -> UniPoly {
        UniPoly::new(Symbol::Z, coeffs.iter().map(|&(n, d)| sc(n, d)).collect())
    }

    #[test]
    fn series_examples() {
        // Laguerre b=1, n=2: z^2 - 4z + 2
        let p = series_polynomial(&FamilySpec::laguerre(sc(1, 1)), 2).unwrap();
        assert_eq!(p, poly(&[(2, 1), (-4, 1), (1, 1)]));

        // E at c=1, n=1: z + 1/8
        let p = series_polynomial(&FamilySpec::family_e(sc(1, 1)), 1).unwrap();
        assert_eq!(p, poly(&[(1, 8), (1, 1)]));

        // Jacobi a=2, b=1, n=1: z - 1/3
        let p = series_polynomial(&FamilySpec::jacobi(sc(2, 1), sc(1, 1)), 1).unwrap();
        assert_eq!(p, poly(&[(-1, 3), (1, 1)]));

        // F at c=1, n=1: z + 1/6
        let p = series_polynomial(&FamilySpec::family_f(sc(1, 1)), 1).unwrap();
        assert_eq!(p, poly(&[(1, 6), (1, 1)]));
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = FamilySpec::family_f(sc(0, 1));
        assert!(matches!(
            series_polynomial(&bad, 1),
            Err(FamilyError::InvalidParams { .. })
        ));
        assert!(!FamilySpec::laguerre(sc(-2, 1)).is_definable());
        assert!(FamilySpec::laguerre(sc(-1, 2)).is_definable());
    }

    #[test]
    fn validity_predicates() {
        let j01 = FamilySpec::jacobi(sc(0, 1), sc(1, 1));
        assert!(j01.is_definable());
        assert!(!j01.is_quasi_orthogonal()); // a - b = -1
        let j21 = FamilySpec::jacobi(sc(2, 1), sc(1, 1));
        assert!(j21.is_quasi_orthogonal());
        assert!(j21.is_orthogonal());
        assert!(!FamilySpec::bessel(sc(0, 1)).is_orthogonal());
        assert!(FamilySpec::family_f(sc(-1, 2)).is_orthogonal());
        assert!(!FamilySpec::family_e(sc(-1, 2)).is_orthogonal());
    }

    #[test]
    fn ratio_function_examples() {
        use crate::parser::parse_poly_expr;
        // Laguerre: (s-u)/((s+1)(s+b))
        let f = FamilySpec::laguerre(sc(5, 2)).coefficient_ratio().unwrap();
        let num = parse_poly_expr("s-u").unwrap();
        let den = parse_poly_expr("(s+1)*(s+5/2)").unwrap();
        assert_eq!(f, reduce(num, den).unwrap());

        // Bessel: (s-u)(s+u+a)/(s+1)
        let f = FamilySpec::bessel(sc(2, 1)).coefficient_ratio().unwrap();
        let num = parse_poly_expr("(s-u)*(s+u+2)").unwrap();
        let den = parse_poly_expr("s+1").unwrap();
        assert_eq!(f, reduce(num, den).unwrap());

        // E: (s-u)(s-u+1-c)(s+u+1)(s+u+c)/((s+1)(s+1/2))
        let c = sc(7, 3);
        let f = FamilySpec::family_e(c.clone()).coefficient_ratio().unwrap();
        let num = parse_poly_expr("(s-u)*(s-u+1-7/3)*(s+u+1)*(s+u+7/3)").unwrap();
        let den = parse_poly_expr("(s+1)*(s+1/2)").unwrap();
        assert_eq!(f, reduce(num, den).unwrap());
    }

    #[test]
    fn coefficients_from_ratio_examples() {
        // Laguerre b=1, n=2 -> [2, -4, 1]
        let f = FamilySpec::laguerre(sc(1, 1)).coefficient_ratio().unwrap();
        assert_eq!(
            coefficients_from_ratio(&f, 2).unwrap(),
            vec![sc(2, 1), sc(-4, 1), sc(1, 1)]
        );

        // E family, n=1 -> [1/(4c(c+1)), 1] at c = 7/3
        let c = sc(7, 3);
        let f = FamilySpec::family_e(c.clone()).coefficient_ratio().unwrap();
        let c0 = (&(&(&sc(4, 1) * &c) * &(&c + &sc(1, 1)))).recip().unwrap();
        assert_eq!(coefficients_from_ratio(&f, 1).unwrap(), vec![c0, sc(1, 1)]);

        // Jacobi a=2, b=1, n=2 -> [1/10, -4/5, 1]
        let f = FamilySpec::jacobi(sc(2, 1), sc(1, 1)).coefficient_ratio().unwrap();
        assert_eq!(
            coefficients_from_ratio(&f, 2).unwrap(),
            vec![sc(1, 10), sc(-4, 5), sc(1, 1)]
        );
    }

    #[test]
    fn closed_alpha_beta_examples() {
        // Laguerre: alpha = 2u + b, beta = u(u+b-1)
        let (alpha, beta) = FamilySpec::laguerre(sc(3, 1)).closed_alpha_beta().unwrap();
        assert_eq!(alpha.eval_u_only(&sc(1, 1)).unwrap(), sc(5, 1));
        assert_eq!(beta.eval_u_only(&sc(2, 1)).unwrap(), sc(8, 1));

        // Jacobi a=2, b=1: alpha(1) = 7/15, beta(1) = 1/18
        let (alpha, beta) = FamilySpec::jacobi(sc(2, 1), sc(1, 1)).closed_alpha_beta().unwrap();
        assert_eq!(alpha.eval_u_only(&sc(1, 1)).unwrap(), sc(7, 15));
        assert_eq!(beta.eval_u_only(&sc(1, 1)).unwrap(), sc(1, 18));

        // Bessel has the leading minus in beta
        let (_, beta) = FamilySpec::bessel(sc(2, 1)).closed_alpha_beta().unwrap();
        // beta(u) = -u(u+1)/((2u+2)(2u+1)^2 2u) at a=2
        assert_eq!(beta.eval_u_only(&sc(1, 1)).unwrap(), sc(-2, 4 * 9 * 2));
    }

    #[test]
    fn recurrence_examples() {
        // Laguerre b=1: (z-3)(z-1) - 1 = z^2 - 4z + 2
        let spec = FamilySpec::laguerre(sc(1, 1));
        let seq = generate(&spec, 2, GenMethod::Recurrence).unwrap();
        assert_eq!(seq.polys[2], poly(&[(2, 1), (-4, 1), (1, 1)]));

        // strict generator rejects vanishing beta
        let err = recurrence_generate(|_| sc(0, 1), |_| sc(0, 1), &sc(0, 1), 3).unwrap_err();
        assert_eq!(err, FamilyError::BetaVanishes { n: 1 });
    }

    #[test]
    fn e_with_default_start_is_the_other_family() {
        // With alpha, beta of E(c) but c0 = -alpha(0), the recurrence produces
        // F at parameter c-1.
        let c = sc(3, 1);
        let e = FamilySpec::family_e(c.clone());
        let (alpha, beta) = e.closed_alpha_beta().unwrap();
        let alpha_at = |n: usize| alpha.eval_u_only(&ExactScalar::int(n as i64)).unwrap();
        let beta_at = |n: usize| beta.eval_u_only(&ExactScalar::int(n as i64)).unwrap();
        let c0 = -alpha_at(0);
        let seq = recurrence_generate_unchecked(alpha_at, beta_at, &c0, 8);
        let f_family = generate(&FamilySpec::family_f(&c - &sc(1, 1)), 8, GenMethod::Series).unwrap();
        assert_eq!(seq.polys, f_family.polys);

        // with the correct c0 it produces E(c) itself
        let seq = generate(&e, 8, GenMethod::Recurrence).unwrap();
        let series = generate(&e, 8, GenMethod::Series).unwrap();
        assert_eq!(seq.polys, series.polys);
    }

    #[test]
    fn actual_coeffs_examples() {
        // plain triple: P0=1, P1=z, P2=z^2+1 -> alpha=0, beta=-1
        let (a, b) = actual_recurrence_coeffs(
            &poly(&[(1, 1)]),
            &poly(&[(0, 1), (1, 1)]),
            &poly(&[(1, 1), (0, 1), (1, 1)]),
        )
        .unwrap();
        assert_eq!(a, sc(0, 1));
        assert_eq!(b, sc(-1, 1));

        // Laguerre b=1 triple at n=1: alpha=3, beta=1
        let seq = generate(&FamilySpec::laguerre(sc(1, 1)), 2, GenMethod::Series).unwrap();
        let (a, b) = actual_recurrence_coeffs(&seq.polys[0], &seq.polys[1], &seq.polys[2]).unwrap();
        assert_eq!(a, sc(3, 1));
        assert_eq!(b, sc(1, 1));

        // non-three-term triple is rejected
        let err = actual_recurrence_coeffs(
            &poly(&[(1, 1)]),
            &poly(&[(0, 1), (1, 1)]),
            &poly(&[(1, 1), (5, 1), (0, 1), (1, 1)]),
        )
        .unwrap_err();
        assert_eq!(err, FamilyError::NotThreeTerm);
    }

    #[test]
    fn bessel_a0_beta1_exception() {
        // actual beta_1 = -1/2, closed-form value at 1 differs
        let spec = FamilySpec::bessel(sc(0, 1));
        let seq = generate(&spec, 2, GenMethod::Series).unwrap();
        assert_eq!(seq.polys[1], poly(&[(-1, 1), (1, 1)]));
        assert_eq!(seq.polys[2], poly(&[(1, 6), (-2, 3), (1, 1)]));
        let (a1, b1) = actual_recurrence_coeffs(&seq.polys[0], &seq.polys[1], &seq.polys[2]).unwrap();
        assert_eq!(a1, sc(-1, 3));
        assert_eq!(b1, sc(-1, 2));
        let (alpha, beta) = spec.closed_alpha_beta().unwrap();
        assert_eq!(alpha.eval_u_only(&sc(1, 1)).unwrap(), sc(-1, 3));
        let closed_b1 = beta.eval_u_only(&sc(1, 1)).unwrap();
        assert_eq!(closed_b1, sc(-1, 4));
        assert_ne!(closed_b1, b1);
        // the pointwise route recovers the actual value
        let f = spec.coefficient_ratio().unwrap();
        assert_eq!(beta_one_from_ratio(&f).unwrap(), sc(-1, 2));
    }

    #[test]
    fn moment_examples() {
        // Laguerre b=1: mu_k = k!
        let mu = family_moments(&FamilySpec::laguerre(sc(1, 1)), 6).unwrap();
        let expect: Vec<ExactScalar> =
            [1i64, 1, 2, 6, 24, 120, 720].iter().map(|&k| sc(k, 1)).collect();
        assert_eq!(mu, expect);

        // mu_1 = -c0 for any family
        let spec = FamilySpec::family_e(sc(3, 2));
        let mu = family_moments(&spec, 2).unwrap();
        assert_eq!(mu[0], sc(1, 1));
        assert_eq!(mu[1], -spec.c0().unwrap());

        // Laguerre b=5/2: mu_2 = b(b+1) = 35/4
        let mu = family_moments(&FamilySpec::laguerre(sc(5, 2)), 2).unwrap();
        assert_eq!(mu[2], sc(35, 4));
    }

    #[test]
    fn gram_examples() {
        // Laguerre b=1 up to degree 2: diag(1, 1, 4)
        let spec = FamilySpec::laguerre(sc(1, 1));
        let seq = generate(&spec, 2, GenMethod::Series).unwrap();
        let mu = family_moments(&spec, 4).unwrap();
        let q = gram_matrix(&seq, &mu).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(q[i][j].is_zero());
                }
            }
        }
        assert_eq!(q[0][0], sc(1, 1));
        assert_eq!(q[1][1], sc(1, 1));
        assert_eq!(q[2][2], sc(4, 1));

        // Bessel a=0: Q_{11} = -1/2 (quasi-orthogonal, not orthogonal)
        let spec = FamilySpec::bessel(sc(0, 1));
        let seq = generate(&spec, 1, GenMethod::Series).unwrap();
        let mu = family_moments(&spec, 2).unwrap();
        let q = gram_matrix(&seq, &mu).unwrap();
        assert_eq!(q[0][0], sc(1, 1));
        assert_eq!(q[1][1], sc(-1, 2));
    }

    #[test]
    fn euler_residual_examples() {
        // E parameters at c=1, n=1 annihilate 1 + 8z
        let spec = FamilySpec::family_e(sc(1, 1));
        let (upper, lower) = spec.series_params(1);
        let res = euler_operator_residual(&upper, &lower, &poly(&[(1, 1), (8, 1)]));
        assert!(res.is_zero());

        // F at c=5/2 up to n=6
        let spec = FamilySpec::family_f(sc(5, 2));
        for n in 0..=6 {
            let p = series_polynomial(&spec, n).unwrap();
            let (upper, lower) = spec.series_params(n);
            assert!(euler_operator_residual(&upper, &lower, &p).is_zero());
        }

        // residual detects a perturbed polynomial
        let res = euler_operator_residual(
            &FamilySpec::family_e(sc(1, 1)).series_params(1).0,
            &FamilySpec::family_e(sc(1, 1)).series_params(1).1,
            &poly(&[(1, 1), (9, 1)]),
        );
        assert!(!res.is_zero());
    }

    #[test]
    fn rescale_covariance() {
        let r = sc(-2, 1);
        let base = FamilySpec::jacobi(sc(1, 3), sc(1, 4));
        let scaled = base.clone().with_rescale(r.clone());
        for n in 0..=5 {
            let p1 = series_polynomial(&base, n).unwrap();
            let p2 = series_polynomial(&scaled, n).unwrap();
            // p2(z) = r^{-n} p1(r z)
            let expect = p1
                .compose_affine(&r, &ExactScalar::zero())
                .scale(&r.pow(-(n as i32)));
            assert_eq!(p2, expect);
        }
        // ratio function scales by r
        let f1 = base.coefficient_ratio().unwrap();
        let f2 = scaled.coefficient_ratio().unwrap();
        assert_eq!(f2, f1.scale(&r));
        // triple agreement under rescale
        for method in [GenMethod::Ratio, GenMethod::Recurrence] {
            let seq = generate(&scaled, 6, method).unwrap();
            let series = generate(&scaled, 6, GenMethod::Series).unwrap();
            assert_eq!(seq.polys, series.polys);
        }
    }

    #[test]
    fn jacobi_degenerate_point_generates() {
        // a=0, b=1 is definable but not quasi-orthogonal: beta_1 = 0 and the
        // three generators still agree.
        let spec = FamilySpec::jacobi(sc(0, 1), sc(1, 1));
        let series = generate(&spec, 6, GenMethod::Series).unwrap();
        let ratio = generate(&spec, 6, GenMethod::Ratio).unwrap();
        let rec = generate(&spec, 6, GenMethod::Recurrence).unwrap();
        assert_eq!(series.polys, ratio.polys);
        assert_eq!(series.polys, rec.polys);
        let (_, b1) = actual_recurrence_coeffs(&series.polys[0], &series.polys[1], &series.polys[2])
            .unwrap();
        assert!(b1.is_zero());
    }
}
