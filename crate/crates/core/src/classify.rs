//! The inverse problem: recovering a family, its parameters and rescaling
//! from a coefficient-ratio function, and decomposing a general ratio into
//! the `(kappa, p, q, w, g)` normal form
//! `f = kappa * q(s+u) p(s-u) * g(u, s+1) / (w(s) g(u, s))`.

use thiserror::Error;

use crate::bipoly::BiPoly;
use crate::birat::{reduce, BiRat};
use crate::error::ExactError;
use crate::families::{FamilyKind, FamilySpec};
use crate::scalar::ExactScalar;
use crate::separate::separate_sum_diff;
use crate::unipoly::{Symbol, UniPoly};

/// The normal form of a ratio function; `p`, `q`, `w` are monic and `g` is
/// content-normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub kappa: ExactScalar,
    pub p: UniPoly,
    pub q: UniPoly,
    pub w: UniPoly,
    pub g: BiPoly,
}

impl NormalForm {
    /// Re-assembles `kappa * q(s+u) p(s-u) g(u,s+1) / (w(s) g(u,s))`.
    pub fn reassemble(&self) -> Result<BiRat, ExactError> {
        let zero = ExactScalar::zero();
        let q_us = BiPoly::from_unipoly_subst(&self.q, 1, 1, &zero);
        let p_us = BiPoly::from_unipoly_subst(&self.p, -1, 1, &zero);
        let w_s = BiPoly::from_unipoly_subst(&self.w, 0, 1, &zero);
        let num = (&(&q_us * &p_us) * &self.g.shift_s(1)).scale(&self.kappa);
        reduce(num, &w_s * &self.g)
    }
}

/// Successful identification of a family from its ratio function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyResult {
    pub spec: FamilySpec,
    pub decomposition: NormalForm,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero ratio function")]
    ZeroInput,
    #[error("not of the s-only-denominator kind: reduced denominator {den} depends on u")]
    NotJacobiType { den: BiPoly },
    #[error("numerator does not split as kappa * q(s+u) * p(s-u): {num}")]
    NotSeparable { num: BiPoly, w: UniPoly },
    #[error("separable but outside the family table: p = {p}, q = {q}, w = {w}")]
    NoMatch { p: UniPoly, q: UniPoly, w: UniPoly },
    #[error("missing forced factor: need p(0) = 0 and w(-1) = 0, got p = {p}, w = {w}")]
    MissingForcedFactor { p: UniPoly, w: UniPoly },
    #[error("no normal-form decomposition found")]
    NotRationalNormalForm,
    #[error("ambiguous decomposition: two candidates satisfy all side conditions")]
    Ambiguous { first: Box<NormalForm>, second: Box<NormalForm> },
}

/// Classifies a ratio function `N/D` whose reduced denominator does not
/// depend on `u`, returning the family, exact parameters and rescale.
pub fn classify_jacobi_type(num: &BiPoly, den: &BiPoly) -> Result<ClassifyResult, ClassifyError> {
    if den.is_zero() {
        return Err(ClassifyError::ZeroDenominator);
    }
    if num.is_zero() {
        return Err(ClassifyError::ZeroInput);
    }
    let f = reduce(num.clone(), den.clone()).map_err(|_| ClassifyError::ZeroDenominator)?;
    if !f.den_is_s_only() {
        return Err(ClassifyError::NotJacobiType { den: f.den().clone() });
    }
    let w_raw = f.den().to_unipoly_s().expect("s-only denominator");
    let den_lc = w_raw.leading_coeff();
    let w = w_raw.monic();

    let sep = separate_sum_diff(f.num()).map_err(|e| match e {
        ExactError::NotSeparable | ExactError::ProbeFailure => ClassifyError::NotSeparable {
            num: f.num().clone(),
            w: w.clone(),
        },
        other => panic!("unexpected separation failure: {other}"),
    })?;
    let rescale = &sep.kappa / &den_lc;
    let p = sep.p;
    let q = sep.q;

    if !p.eval(&ExactScalar::zero()).is_zero() || !w.eval(&ExactScalar::int(-1)).is_zero() {
        return Err(ClassifyError::MissingForcedFactor { p, w });
    }

    let kind = match_table(&p, &q, &w).ok_or(ClassifyError::NoMatch {
        p: p.clone(),
        q: q.clone(),
        w: w.clone(),
    })?;
    let decomposition = NormalForm { kappa: rescale.clone(), p, q, w, g: BiPoly::one() };
    Ok(ClassifyResult {
        spec: FamilySpec { kind, rescale },
        decomposition,
    })
}

/// Pattern-matches monic `(p, q, w)` against the family table. Degree
/// constraints: `deg w <= 2`, and either `deg p <= 1, deg q <= 1`, or all of
/// `p, q, w` quadratic.
fn match_table(p: &UniPoly, q: &UniPoly, w: &UniPoly) -> Option<FamilyKind> {
    let one = ExactScalar::one();
    let s_plus_1 = UniPoly::linear(Symbol::S, one.clone());
    if w.degree() > 2 {
        return None;
    }
    match p.degree() {
        1 => {
            // p = t after the forced-factor check
            match (q.degree(), q.is_constant(), w.degree()) {
                (_, true, 2) => {
                    let rest = w.exact_div(&s_plus_1)?;
                    Some(FamilyKind::Laguerre { b: rest.coeff(0) })
                }
                (1, false, 1) => Some(FamilyKind::Bessel { a: q.coeff(0) }),
                (1, false, 2) => {
                    let rest = w.exact_div(&s_plus_1)?;
                    Some(FamilyKind::Jacobi { a: q.coeff(0), b: rest.coeff(0) })
                }
                _ => None,
            }
        }
        2 => {
            if q.degree() != 2 || w.degree() != 2 {
                return None;
            }
            // p(0) = 0, so p = t(t + 1 - c)
            let c = &one - &p.coeff(1);
            let rest = w.exact_div(&s_plus_1)?;
            let w0 = rest.coeff(0);
            let t = Symbol::T;
            if w0 == ExactScalar::ratio(1, 2) {
                let expect = &UniPoly::linear(t, one.clone()) * &UniPoly::linear(t, c.clone());
                if *q == expect {
                    return Some(FamilyKind::E { c });
                }
                None
            } else if w0 == ExactScalar::ratio(3, 2) {
                let expect = &UniPoly::linear(t, ExactScalar::int(2))
                    * &UniPoly::linear(t, &c + &one);
                if *q == expect {
                    return Some(FamilyKind::F { c });
                }
                None
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Decomposes a reduced nonzero ratio function into the
/// `(kappa, p, q, w, g)` normal form.
///
/// All `u`-dependent irreducible factors of the denominator must belong to
/// `g`; the `s`-only factors are split between `w` and `g` by a bounded
/// search over assignments (at most 2^4), and the side conditions of the
/// normal form make the valid assignment unique. Two surviving assignments
/// are reported as [`ClassifyError::Ambiguous`] rather than picked from.
pub fn decompose_ratio(f: &BiRat) -> Result<NormalForm, ClassifyError> {
    if f.is_zero() {
        return Err(ClassifyError::ZeroInput);
    }
    let den = f.den();
    // s-only content and the u-essential cofactor
    let s_content = den.content_in_s();
    let (a_part, _) = den
        .exact_div(&BiPoly::from_unipoly_subst(&s_content, 0, 1, &ExactScalar::zero()))
        .expect("content divides")
        .content_normalized();
    if !a_part.content_in_u().is_constant() {
        // a factor independent of s can never sit in g
        return Err(ClassifyError::NotRationalNormalForm);
    }

    let (_, factors) = factor_unipoly(&s_content);
    let multiplicity: usize = factors.iter().map(|&(_, m)| m as usize).sum();
    if multiplicity > 4 {
        return Err(ClassifyError::NotRationalNormalForm);
    }

    let mut found: Vec<NormalForm> = Vec::new();
    let mut counts = vec![0u32; factors.len()];
    loop {
        if let Some(nf) = try_assignment(f, &a_part, &factors, &counts) {
            if !found.contains(&nf) {
                found.push(nf);
            }
        }
        // next multiset assignment
        let mut i = 0;
        loop {
            if i == factors.len() {
                let found_len = found.len();
                return match found_len {
                    0 => Err(ClassifyError::NotRationalNormalForm),
                    1 => Ok(found.pop().expect("nonempty")),
                    _ => Err(ClassifyError::Ambiguous {
                        first: Box::new(found[0].clone()),
                        second: Box::new(found[1].clone()),
                    }),
                };
            }
            if counts[i] < factors[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

/// Tries one split of the s-only factors: `counts[i]` copies of factor `i`
/// go to `g`, the rest to `w`.
fn try_assignment(
    f: &BiRat,
    a_part: &BiPoly,
    factors: &[(UniPoly, u32)],
    counts: &[u32],
) -> Option<NormalForm> {
    let zero = ExactScalar::zero();
    let mut g_s = UniPoly::one(Symbol::S);
    let mut w = UniPoly::one(Symbol::S);
    for (i, (fac, mult)) in factors.iter().enumerate() {
        for _ in 0..counts[i] {
            g_s = &g_s * fac;
        }
        for _ in 0..(mult - counts[i]) {
            w = &w * fac;
        }
    }
    let g_raw = &a_part.clone() * &BiPoly::from_unipoly_subst(&g_s, 0, 1, &zero);
    let (g, _) = g_raw.content_normalized();
    if !g.content_in_u().is_constant() {
        return None;
    }

    let quotient = f.num().exact_div(&g.shift_s(1))?;
    let sep = separate_sum_diff(&quotient).ok()?;

    // denominator = d_const * w(s) * g
    let w_bip = BiPoly::from_unipoly_subst(&w, 0, 1, &zero);
    let d_const = f.den().exact_div(&(&w_bip * &g))?;
    if !d_const.is_constant() {
        return None;
    }
    let d_const = d_const.coeff((0, 0));
    let kappa = &sep.kappa / &d_const;

    // coprimality side conditions on g
    let w_shift = BiPoly::from_unipoly_subst(&w, 0, 1, &ExactScalar::int(-1));
    let q_us = BiPoly::from_unipoly_subst(&sep.q, 1, 1, &zero);
    let p_us = BiPoly::from_unipoly_subst(&sep.p, -1, 1, &zero);
    for other in [&w_shift, &q_us, &p_us] {
        if !BiPoly::gcd(&g, other).is_constant() {
            return None;
        }
    }

    let nf = NormalForm { kappa, p: sep.p, q: sep.q, w, g };
    let back = nf.reassemble().ok()?;
    if back == *f {
        Some(nf)
    } else {
        None
    }
}

/// Factors a univariate polynomial over the rationals into monic factors:
/// all rational roots are extracted, quadratics are split when the
/// discriminant is a rational square, and anything left is kept whole.
/// Returns `(leading, factors-with-multiplicity)`.
pub(crate) fn factor_unipoly(p: &UniPoly) -> (ExactScalar, Vec<(UniPoly, u32)>) {
    if p.is_zero() || p.is_constant() {
        return (p.coeff(0), Vec::new());
    }
    let lead = p.leading_coeff();
    let mut rest = p.monic();
    let mut factors: Vec<(UniPoly, u32)> = Vec::new();
    let push = |f: UniPoly, factors: &mut Vec<(UniPoly, u32)>| {
        for entry in factors.iter_mut() {
            if entry.0 == f {
                entry.1 += 1;
                return;
            }
        }
        factors.push((f, 1));
    };
    while rest.degree() >= 1 {
        if rest.degree() == 1 {
            push(rest.clone(), &mut factors);
            break;
        }
        if let Some(root) = rational_root(&rest) {
            let lin = UniPoly::linear(rest.symbol(), -&root);
            rest = rest.exact_div(&lin).expect("root divides");
            push(lin, &mut factors);
            continue;
        }
        if rest.degree() == 2 {
            // monic t^2 + bt + c with rational-square discriminant
            let b = rest.coeff(1);
            let c = rest.coeff(0);
            let disc = &(&b * &b) - &(&ExactScalar::int(4) * &c);
            if let Some(sq) = rational_sqrt(&disc) {
                let half = ExactScalar::ratio(1, 2);
                let r1 = &(&(-&b) + &sq) * &half;
                let r2 = &(&(-&b) - &sq) * &half;
                push(UniPoly::linear(rest.symbol(), -&r1), &mut factors);
                push(UniPoly::linear(rest.symbol(), -&r2), &mut factors);
                break;
            }
        }
        // no rational splitting found; keep the block whole
        push(rest.clone(), &mut factors);
        break;
    }
    (lead, factors)
}

/// A rational root of a monic rational polynomial, if one exists; searches
/// the divisors of the integerized constant and leading terms.
fn rational_root(p: &UniPoly) -> Option<ExactScalar> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};

    let zero = ExactScalar::zero();
    if p.eval(&zero).is_zero() {
        return Some(zero);
    }
    // integerize
    let mut den_lcm = BigInt::one();
    for c in p.coeffs() {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&den_lcm / c.denom()))
        .collect();
    let a0 = ints.first()?.abs();
    let an = ints.last()?.abs();
    if a0.is_zero() {
        return Some(ExactScalar::zero());
    }
    let d0 = small_divisors(&a0)?;
    let dn = small_divisors(&an)?;
    for num in &d0 {
        for den in &dn {
            for sign in [1i64, -1] {
                let cand = ExactScalar::from_parts(num * BigInt::from(sign), den.clone())
                    .expect("nonzero divisor");
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Positive divisors, bailing out (None) when the integer is too large to
/// enumerate cheaply.
fn small_divisors(n: &num_bigint::BigInt) -> Option<Vec<num_bigint::BigInt>> {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    let n = n.to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i != n / i {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    Some(out)
}

/// Exact square root of a nonnegative rational, when it is a perfect square.
fn rational_sqrt(x: &ExactScalar) -> Option<ExactScalar> {
    use num_traits::Signed;
    if x.is_negative() {
        return None;
    }
    let sn = x.numer().abs().sqrt();
    let sd = x.denom().sqrt();
    if &(&sn * &sn) == x.numer() && &(&sd * &sd) == x.denom() {
        ExactScalar::from_parts(sn, sd).ok()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilyKind;
    use crate::parser::parse_poly_expr;

    fn sc(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    fn classify_str(num: &str, den: &str) -> Result<ClassifyResult, ClassifyError> {
        classify_jacobi_type(&parse_poly_expr(num).unwrap(), &parse_poly_expr(den).unwrap())
    }

    #[test]
    fn jacobi_round() {
        let r = classify_str("(s-u)*(s+u+2)", "(s+1)^2").unwrap();
        assert_eq!(r.spec.kind, FamilyKind::Jacobi { a: sc(2, 1), b: sc(1, 1) });
        assert_eq!(r.spec.rescale, sc(1, 1));
    }

    #[test]
    fn laguerre_with_rescale() {
        let r = classify_str("3*(s-u)", "(s+1)*(s+2)").unwrap();
        assert_eq!(r.spec.kind, FamilyKind::Laguerre { b: sc(2, 1) });
        assert_eq!(r.spec.rescale, sc(3, 1));
    }

    #[test]
    fn e_family_match() {
        let r = classify_str("(s-u)*(s-u-1)*(s+u+1)*(s+u+2)", "(s+1)*(s+1/2)").unwrap();
        assert_eq!(r.spec.kind, FamilyKind::E { c: sc(2, 1) });
        assert_eq!(r.spec.rescale, sc(1, 1));
    }

    #[test]
    fn u_dependent_denominator_rejected() {
        let err = classify_str("(s-u)*(s+u+1)", "(s+1)*(u+s+3)").unwrap_err();
        assert!(matches!(err, ClassifyError::NotJacobiType { .. }));
    }

    #[test]
    fn table_violations() {
        // degree-3 q
        let err = classify_str("(s-u)*(s+u+1)*(s+u+2)*(s+u+3)", "(s+1)*(s+2)").unwrap_err();
        assert!(matches!(err, ClassifyError::NoMatch { .. }));
        // w without the forced root -1
        let err = classify_str("s-u", "s+2").unwrap_err();
        assert!(matches!(err, ClassifyError::MissingForcedFactor { .. }));
        // non-separable numerator
        let err = classify_str("s^2+u", "s+1").unwrap_err();
        assert!(matches!(err, ClassifyError::NotSeparable { .. }));
        // E-shaped w with F-shaped q
        let err = classify_str("(s-u)*(s-u-1)*(s+u+2)*(s+u+3)", "(s+1)*(s+1/2)").unwrap_err();
        assert!(matches!(err, ClassifyError::NoMatch { .. }));
    }

    #[test]
    fn round_trip_all_families() {
        use crate::families::FamilySpec;
        let specs = [
            FamilySpec::jacobi(sc(2, 1), sc(1, 1)),
            FamilySpec::laguerre(sc(5, 2)),
            FamilySpec::bessel(sc(1, 2)),
            FamilySpec::family_e(sc(7, 3)),
            FamilySpec::family_f(sc(1, 2)),
        ];
        for spec in specs {
            for r in [sc(1, 1), sc(3, 1), sc(-2, 1), sc(5, 7)] {
                let spec = spec.clone().with_rescale(r);
                let f = spec.coefficient_ratio().unwrap();
                let got = classify_jacobi_type(f.num(), f.den()).unwrap();
                assert_eq!(got.spec, spec);
            }
        }
    }

    #[test]
    fn decompose_family_ratios() {
        // F at c=2: g = 1, p = t(t-1), q = (t+2)(t+3), w = (s+1)(s+3/2)
        let spec = crate::families::FamilySpec::family_f(sc(2, 1));
        let f = spec.coefficient_ratio().unwrap();
        let nf = decompose_ratio(&f).unwrap();
        assert!(nf.g.is_constant());
        assert_eq!(nf.kappa, sc(1, 1));
        let t = Symbol::T;
        assert_eq!(nf.p, &UniPoly::var(t) * &UniPoly::linear(t, sc(-1, 1)));
        assert_eq!(
            nf.q,
            &UniPoly::linear(t, sc(2, 1)) * &UniPoly::linear(t, sc(3, 1))
        );
        assert_eq!(nf.reassemble().unwrap(), f);
    }

    #[test]
    fn decompose_trivial_laguerre_like() {
        // (s-u)/(s+1): g = 1, p = t, q = 1, w = s+1, kappa = 1
        let f = reduce(
            parse_poly_expr("s-u").unwrap(),
            parse_poly_expr("s+1").unwrap(),
        )
        .unwrap();
        let nf = decompose_ratio(&f).unwrap();
        assert!(nf.g.is_constant());
        assert_eq!(nf.kappa, sc(1, 1));
        assert_eq!(nf.p, UniPoly::var(Symbol::T));
        assert!(nf.q.is_one());
        assert_eq!(nf.w, UniPoly::linear(Symbol::S, sc(1, 1)));
        // and it is not in the family table
        assert!(matches!(
            classify_jacobi_type(f.num(), f.den()),
            Err(ClassifyError::NoMatch { .. })
        ));
    }

    #[test]
    fn decompose_with_gauge_factor() {
        // g = (u+s+1)(s-u-2) - 1/2 (u+s+3)(s-u); f built as in the
        // interpolating construction with p = t(t-2), q = (t+1)(t+3),
        // w = (s+1)(s+3/2).
        let g = parse_poly_expr("(u+s+1)*(s-u-2) - 1/2*(u+s+3)*(s-u)").unwrap();
        let p = &UniPoly::var(Symbol::T) * &UniPoly::linear(Symbol::T, sc(-2, 1));
        let q = &UniPoly::linear(Symbol::T, sc(1, 1)) * &UniPoly::linear(Symbol::T, sc(3, 1));
        let w = &UniPoly::linear(Symbol::S, sc(1, 1)) * &UniPoly::linear(Symbol::S, sc(3, 2));
        let zero = ExactScalar::zero();
        let num = &(&BiPoly::from_unipoly_subst(&q, 1, 1, &zero)
            * &BiPoly::from_unipoly_subst(&p, -1, 1, &zero))
            * &g.shift_s(1);
        let den = &BiPoly::from_unipoly_subst(&w, 0, 1, &zero) * &g;
        let f = reduce(num, den).unwrap();
        let nf = decompose_ratio(&f).unwrap();
        assert_eq!(nf.p, p);
        assert_eq!(nf.q, q);
        assert_eq!(nf.w, w);
        assert_eq!(nf.g, g.content_normalized().0);
        assert_eq!(nf.reassemble().unwrap(), f);
    }

    #[test]
    fn factor_unipoly_cases() {
        let w = parse_poly_expr("(s+1)*(s+3/2)")
            .unwrap()
            .to_unipoly_s()
            .unwrap();
        let (lead, factors) = factor_unipoly(&w);
        assert_eq!(lead, sc(1, 1));
        assert_eq!(factors.len(), 2);
        // irreducible quadratic stays whole
        let q = UniPoly::new(Symbol::S, vec![sc(1, 1), sc(1, 1), sc(1, 1)]);
        let (_, factors) = factor_unipoly(&q);
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.degree(), 2);
    }
}
