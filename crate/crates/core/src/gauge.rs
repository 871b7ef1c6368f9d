//! Rational-type families beyond the five with `s`-only denominators:
//! gauge transforms `c(n,k) -> g(n,k) c(n,k)` and the three constructions
//! they support, together with the consistency identities every rational
//! family must satisfy.

use thiserror::Error;

use crate::bipoly::BiPoly;
use crate::birat::{reduce, BiRat};
use crate::families::{
    alpha_beta_from_ratio, assemble, coefficients_from_ratio, generate, FamilyError, FamilySpec,
    GenMethod, PolySeq, Provenance,
};
use crate::scalar::ExactScalar;
use crate::unipoly::{pochhammer_poly, Symbol, UniPoly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaugeError {
    #[error("invalid parameters: {reason}")]
    InvalidParams { reason: String },
    #[error("gauge factor vanishes on the diagonal at n = {n}")]
    GaugeVanishesOnDiagonal { n: usize },
    #[error("identity '{which}' fails first at (n, k) = ({n}, {k})")]
    IdentityFailure { which: String, n: usize, k: usize },
    #[error("the (p, q, w) data do not form a consistent decomposition")]
    InvalidDecomposition,
}

impl From<FamilyError> for GaugeError {
    fn from(e: FamilyError) -> Self {
        GaugeError::InvalidParams { reason: e.to_string() }
    }
}

/// A family given by its coefficient-ratio data rather than a table entry.
#[derive(Debug, Clone)]
pub struct RationalFamily {
    pub label: String,
    /// `s`-direction ratio: `c(n, k+1) = f(n, k) c(n, k)`.
    pub f: BiRat,
    /// `u`-direction ratio `c(n+1, k) = h(n, k) c(n, k)`, when known closed.
    pub h: Option<BiRat>,
    /// Closed three-term coefficients as rational functions of `u`.
    pub alpha: BiRat,
    pub beta: BiRat,
    pub c0: ExactScalar,
    /// Whether the reduced denominator of `f` is independent of `u`.
    pub is_jacobi_type: bool,
}

/// Gauges a single degree-`n` member: multiplies coefficient `k` by
/// `g(n, k)` and renormalizes monic. Errors when `g(n, n) = 0`.
pub fn gauge_polynomial(g: &BiPoly, n: usize, p: &UniPoly) -> Result<UniPoly, GaugeError> {
    let n_s = ExactScalar::int(n as i64);
    let diag = g.eval(&n_s, &n_s);
    if diag.is_zero() {
        return Err(GaugeError::GaugeVanishesOnDiagonal { n });
    }
    let inv = diag.recip().expect("nonzero diagonal");
    let coeffs = (0..=n)
        .map(|k| {
            let gnk = g.eval(&n_s, &ExactScalar::int(k as i64));
            &(&p.coeff(k) * &gnk) * &inv
        })
        .collect();
    Ok(UniPoly::new(Symbol::Z, coeffs))
}

/// Multiplies coefficient `(n, k)` by `g(n, k)` and renormalizes monic;
/// `g(n, n)` must not vanish for any produced degree.
pub fn apply_gauge(g: &BiPoly, seq: &PolySeq) -> Result<PolySeq, GaugeError> {
    let polys = seq
        .polys
        .iter()
        .enumerate()
        .map(|(n, p)| gauge_polynomial(g, n, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolySeq::new(polys, Provenance::Gauge))
}

/// The closed `u`-direction ratio attached to an `s`-only decomposition
/// `f = q(s+u) p(s-u) / w(s)` with trivial gauge:
/// `h = w(u) q(u+s) / (q(2u) q(2u+1) p(s-u-1))`. Requires `p(-1) != 0` and
/// verifies the compatibility `Uf/f = Sh/h` exactly.
pub fn u_direction_ratio(p: &UniPoly, q: &UniPoly, w: &UniPoly) -> Result<BiRat, GaugeError> {
    if p.eval(&ExactScalar::int(-1)).is_zero() {
        return Err(GaugeError::InvalidParams { reason: "p(-1) must be nonzero".into() });
    }
    let zero = ExactScalar::zero();
    let one = ExactScalar::one();
    let num = &BiPoly::from_unipoly_subst(w, 1, 0, &zero) * &BiPoly::from_unipoly_subst(q, 1, 1, &zero);
    let den = &(&BiPoly::from_unipoly_subst(q, 2, 0, &zero)
        * &BiPoly::from_unipoly_subst(q, 2, 0, &one))
        * &BiPoly::from_unipoly_subst(p, -1, 1, &ExactScalar::int(-1));
    let h = reduce(num, den).map_err(|_| GaugeError::InvalidDecomposition)?;

    let f = reduce(
        &BiPoly::from_unipoly_subst(q, 1, 1, &zero) * &BiPoly::from_unipoly_subst(p, -1, 1, &zero),
        BiPoly::from_unipoly_subst(w, 0, 1, &zero),
    )
    .map_err(|_| GaugeError::InvalidDecomposition)?;
    if !shift_compatible(&f, &h) {
        return Err(GaugeError::InvalidDecomposition);
    }
    Ok(h)
}

/// The compatibility identity `Uf/f = Sh/h` between the two ratio
/// directions.
pub fn shift_compatible(f: &BiRat, h: &BiRat) -> bool {
    if f.is_zero() || h.is_zero() {
        return false;
    }
    let lhs = &f.shift_u(1) / f;
    let rhs = &h.shift_s(1) / h;
    lhs == rhs
}

/// Generates `P_0 ..= P_{n_max}` from the ratio function by the descending
/// coefficient product.
pub fn seq_from_ratio(f: &BiRat, n_max: usize) -> Result<PolySeq, GaugeError> {
    let polys = (0..=n_max)
        .map(|n| coefficients_from_ratio(f, n).map(assemble))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolySeq::new(polys, Provenance::RatioProduct))
}

/// Blend of the two Jacobi families at `a = 1`, `b = l + 1/2` and its
/// partner `b' = 3/2 - l`, realized as the polynomial gauge
/// `g(u, s) = r(s) + lambda r(u)` with `r(t) = (t - l + 3/2)_{2l-1}` applied
/// to the first family. Defined for `l >= 1` and `lambda != -1`.
pub fn gauged_jacobi_family(
    l: u32,
    lambda: &ExactScalar,
    n_max: usize,
) -> Result<(RationalFamily, PolySeq), GaugeError> {
    if l == 0 {
        return Err(GaugeError::InvalidParams { reason: "l must be positive".into() });
    }
    if *lambda == ExactScalar::int(-1) {
        return Err(GaugeError::InvalidParams {
            reason: "lambda = -1 degenerates; use the partner-difference construction".into(),
        });
    }
    let b = &ExactScalar::int(l as i64) + &ExactScalar::ratio(1, 2);
    let base = FamilySpec::jacobi(ExactScalar::one(), b);
    let r = pochhammer_poly(
        &(&ExactScalar::ratio(3, 2) - &ExactScalar::int(l as i64)),
        2 * l - 1,
    );
    let zero = ExactScalar::zero();
    let g = &BiPoly::from_unipoly_subst(&r, 0, 1, &zero)
        + &BiPoly::from_unipoly_subst(&r, 1, 0, &zero).scale(lambda);

    let base_seq = generate(&base, n_max, GenMethod::Series)?;
    let seq = apply_gauge(&g, &base_seq)?;

    let f_base = base.coefficient_ratio()?;
    let gauge_ratio = reduce(g.shift_s(1), g.clone())
        .map_err(|_| GaugeError::InvalidParams { reason: "gauge factor is zero".into() })?;
    let f = &f_base * &gauge_ratio;

    let (p, q, w) = base.pqw();
    let h_base = u_direction_ratio(&p, &q, &w)?;
    let h = monic_gauge_h(&h_base, &g)?;

    let (alpha, beta) = alpha_beta_from_ratio(&f)
        .map_err(|e| GaugeError::InvalidParams { reason: e.to_string() })?;
    let c0 = seq.polys.get(1).map(|p| p.coeff(0)).unwrap_or_else(ExactScalar::zero);
    let fam = RationalFamily {
        label: format!("gauged-jacobi(l={l}, lambda={lambda})"),
        is_jacobi_type: f.den_is_s_only(),
        f,
        h: Some(h),
        alpha,
        beta,
        c0,
    };
    Ok((fam, seq))
}

/// `u`-direction ratio of a monic gauged family:
/// `h_base * g(u+1, s) g(u, u) / (g(u, s) g(u+1, u+1))`.
fn monic_gauge_h(h_base: &BiRat, g: &BiPoly) -> Result<BiRat, GaugeError> {
    let g_diag = g.subst_s_affine_u(&ExactScalar::one(), &ExactScalar::zero());
    let num = BiRat::from_poly(&g.shift_u(1) * &g_diag);
    let den = BiRat::from_poly(&g_diag.shift_u(1) * g);
    Ok(&(h_base * &num) / &den)
}

/// The difference family `R_n = monic(Q_{n+1} - P_{n+1})` of the two Jacobi
/// partners at `a = 1`, `b = l + 1/2`; its ratio function is
/// `((r(s+1) - r(u+1)) / (r(s) - r(u+1))) * (s-u-1)(s+u+2) / ((s+1)(s+l+1/2))`.
pub fn jacobi_partner_difference(l: u32, n_max: usize) -> Result<(RationalFamily, PolySeq), GaugeError> {
    if l == 0 {
        return Err(GaugeError::InvalidParams { reason: "l must be positive".into() });
    }
    let one = ExactScalar::one();
    let b = &ExactScalar::int(l as i64) + &ExactScalar::ratio(1, 2);
    let p_spec = FamilySpec::jacobi(one.clone(), b.clone());
    let q_spec = FamilySpec::jacobi(one.clone(), &ExactScalar::ratio(3, 2) - &ExactScalar::int(l as i64));
    let p_seq = generate(&p_spec, n_max + 1, GenMethod::Series)?;
    let q_seq = generate(&q_spec, n_max + 1, GenMethod::Series)?;

    let mut polys = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let diff = &q_seq.polys[n + 1] - &p_seq.polys[n + 1];
        if diff.is_zero() || diff.degree() != n {
            return Err(GaugeError::InvalidParams {
                reason: format!("partner difference degenerates at degree {n}"),
            });
        }
        polys.push(diff.monic());
    }
    let seq = PolySeq::new(polys, Provenance::Gauge);

    let r = pochhammer_poly(
        &(&ExactScalar::ratio(3, 2) - &ExactScalar::int(l as i64)),
        2 * l - 1,
    );
    let zero = ExactScalar::zero();
    let r_s1 = BiPoly::from_unipoly_subst(&r, 0, 1, &one);
    let r_u1 = BiPoly::from_unipoly_subst(&r, 1, 0, &one);
    let r_s = BiPoly::from_unipoly_subst(&r, 0, 1, &zero);
    let shifted_jacobi_num = {
        // (s - u - 1)(s + u + 2)
        let a = &(&BiPoly::var_s() - &BiPoly::var_u()) - &BiPoly::one();
        let bq = &(&BiPoly::var_s() + &BiPoly::var_u()) + &BiPoly::constant(ExactScalar::int(2));
        &a * &bq
    };
    let w = {
        // (s + 1)(s + l + 1/2)
        let a = &BiPoly::var_s() + &BiPoly::one();
        let bq = &BiPoly::var_s() + &BiPoly::constant(b.clone());
        &a * &bq
    };
    let f = reduce(
        &(&r_s1 - &r_u1) * &shifted_jacobi_num,
        &(&r_s - &r_u1) * &w,
    )
    .map_err(|_| GaugeError::InvalidParams { reason: "degenerate ratio".into() })?;

    let (alpha, beta) = alpha_beta_from_ratio(&f)
        .map_err(|e| GaugeError::InvalidParams { reason: e.to_string() })?;
    let c0 = seq.polys.get(1).map(|p| p.coeff(0)).unwrap_or_else(ExactScalar::zero);
    let fam = RationalFamily {
        label: format!("jacobi-partner-difference(l={l})"),
        is_jacobi_type: f.den_is_s_only(),
        f,
        h: None,
        alpha,
        beta,
        c0,
    };
    Ok((fam, seq))
}

/// The two-parameter family interpolating between the odd family at `c`
/// (`lambda = 0`) and the even family at `c + 1` (`lambda = 1`):
/// `g = (u+s+1)(s-u-c) - lambda (u+s+c+1)(s-u)` with
/// `p = t(t-c)`, `q = (t+1)(t+c+1)`, `w = (s+1)(s+3/2)`.
///
/// Construction verifies the lattice ratios in both directions, the
/// inverse-shift three-term identity and the three-term relation of the
/// generated polynomials, and fails with the first violated identity.
pub fn ef_interpolation_family(
    c: &ExactScalar,
    lambda: &ExactScalar,
    n_max: usize,
) -> Result<(RationalFamily, PolySeq), GaugeError> {
    if c.is_nonpositive_integer() {
        return Err(GaugeError::InvalidParams {
            reason: "c must not be a non-positive integer".into(),
        });
    }
    let zero = ExactScalar::zero();
    let one = ExactScalar::one();
    let t = Symbol::T;
    let p = &UniPoly::var(t) * &UniPoly::linear(t, -c);
    let q = &UniPoly::linear(t, one.clone()) * &UniPoly::linear(t, c + &one);
    let w = {
        let s = Symbol::S;
        &UniPoly::linear(s, one.clone()) * &UniPoly::linear(s, ExactScalar::ratio(3, 2))
    };
    let g = {
        let upl = |k: &ExactScalar| -> BiPoly {
            // u + s + k
            &(&BiPoly::var_u() + &BiPoly::var_s()) + &BiPoly::constant(k.clone())
        };
        let smu = |k: &ExactScalar| -> BiPoly {
            // s - u - k
            &(&BiPoly::var_s() - &BiPoly::var_u()) - &BiPoly::constant(k.clone())
        };
        &(&upl(&one) * &smu(c)) - &(&upl(&(c + &one)) * &smu(&zero)).scale(lambda)
    };
    if g.is_zero() {
        return Err(GaugeError::InvalidParams { reason: "gauge factor is identically zero".into() });
    }

    let p_smu = BiPoly::from_unipoly_subst(&p, -1, 1, &zero);
    let q_ups = BiPoly::from_unipoly_subst(&q, 1, 1, &zero);
    let w_s = BiPoly::from_unipoly_subst(&w, 0, 1, &zero);
    let f = reduce(&(&p_smu * &q_ups) * &g.shift_s(1), &w_s * &g)
        .map_err(|_| GaugeError::InvalidParams { reason: "degenerate ratio".into() })?;

    let h = {
        let base = u_direction_ratio(&p, &q, &w)?;
        let g_diag = g.subst_s_affine_u(&one, &zero);
        let num = &base * &BiRat::from_poly(&g_diag * &g.shift_u(1));
        let den = BiRat::from_poly(&g_diag.shift_u(1) * &g);
        &num / &den
    };

    let (alpha, beta) = FamilySpec::family_f(c.clone()).closed_alpha_beta()?;

    let seq = seq_from_ratio(&f, n_max)?;
    let fam = RationalFamily {
        label: format!("ef-interpolation(c={c}, lambda={lambda})"),
        is_jacobi_type: f.den_is_s_only(),
        f,
        h: Some(h),
        alpha,
        beta,
        c0: seq.polys.get(1).map(|p| p.coeff(0)).unwrap_or_else(ExactScalar::zero),
    };
    let report = verify_rational_family(&fam, &seq, n_max);
    if let Some(bad) = report.checks.iter().find(|c| !c.pass) {
        let (n, k) = bad.site.unwrap_or((0, 0));
        return Err(GaugeError::IdentityFailure { which: bad.name.clone(), n, k });
    }
    Ok((fam, seq))
}

/// One verification outcome.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
    /// First counterexample site, when meaningful.
    pub site: Option<(usize, usize)>,
}

impl CheckResult {
    fn pass(name: &str) -> Self {
        CheckResult { name: name.into(), pass: true, detail: None, site: None }
    }

    fn fail(name: &str, detail: String, site: Option<(usize, usize)>) -> Self {
        CheckResult { name: name.into(), pass: false, detail: Some(detail), site }
    }
}

/// Structured verification report; never fails hard, every violation is an
/// entry.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    /// Lattice points where a ratio check degenerated to `0 = 0` because the
    /// denominator vanished; recorded, not fatal.
    pub exceptional_points: Vec<(usize, usize)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs every applicable identity on a rational family and a generated
/// sequence: the two-direction compatibility, the inverse-shift three-term
/// identity, both lattice ratio laws in definitional (cross-multiplied)
/// form, and the three-term relation of the polynomials.
pub fn verify_rational_family(fam: &RationalFamily, seq: &PolySeq, n_max: usize) -> VerifyReport {
    let mut checks = Vec::new();
    let mut exceptional = Vec::new();
    let n_max = n_max.min(seq.max_degree());

    if let Some(h) = &fam.h {
        if shift_compatible(&fam.f, h) {
            checks.push(CheckResult::pass("shift_compatibility"));
        } else {
            checks.push(CheckResult::fail(
                "shift_compatibility",
                "Uf/f differs from Sh/h".into(),
                None,
            ));
        }

        // S^{-1}(f)^{-1} = h + alpha + beta / U^{-1}(h)
        let identity = (|| -> Result<bool, crate::error::ExactError> {
            let lhs = fam.f.shift_s(-1).recip()?;
            let u_inv_h = h.shift_u(-1);
            let rhs = &(h + &fam.alpha) + &(&fam.beta / &u_inv_h);
            Ok(lhs == rhs)
        })();
        match identity {
            Ok(true) => checks.push(CheckResult::pass("inverse_shift_three_term")),
            Ok(false) => checks.push(CheckResult::fail(
                "inverse_shift_three_term",
                "closed identity fails as a rational function".into(),
                None,
            )),
            Err(e) => checks.push(CheckResult::fail(
                "inverse_shift_three_term",
                format!("identity not evaluable: {e}"),
                None,
            )),
        }
    }

    // lattice ratios in the s-direction: c(n,k+1) D(n,k) = c(n,k) N(n,k)
    let mut s_fail = None;
    'souter: for n in 1..=n_max {
        let pn = &seq.polys[n];
        let n_s = ExactScalar::int(n as i64);
        for k in 0..n {
            let k_s = ExactScalar::int(k as i64);
            let dval = fam.f.den().eval(&n_s, &k_s);
            let nval = fam.f.num().eval(&n_s, &k_s);
            if dval.is_zero() {
                exceptional.push((n, k));
                if nval.is_zero() {
                    continue;
                }
            }
            let lhs = &pn.coeff(k + 1) * &dval;
            let rhs = &pn.coeff(k) * &nval;
            if lhs != rhs {
                s_fail = Some((n, k));
                break 'souter;
            }
        }
    }
    match s_fail {
        None => checks.push(CheckResult::pass("lattice_ratio_s")),
        Some((n, k)) => checks.push(CheckResult::fail(
            "lattice_ratio_s",
            format!("c({n},{}) D({n},{k}) != c({n},{k}) N({n},{k})", k + 1),
            Some((n, k)),
        )),
    }

    // lattice ratios in the u-direction, when h is known
    if let Some(h) = &fam.h {
        let mut u_fail = None;
        'uouter: for n in 0..n_max {
            let n_s = ExactScalar::int(n as i64);
            for k in 0..=n {
                let k_s = ExactScalar::int(k as i64);
                let dval = h.den().eval(&n_s, &k_s);
                let nval = h.num().eval(&n_s, &k_s);
                if dval.is_zero() {
                    exceptional.push((n, k));
                    if nval.is_zero() {
                        continue;
                    }
                }
                let lhs = &seq.polys[n + 1].coeff(k) * &dval;
                let rhs = &seq.polys[n].coeff(k) * &nval;
                if lhs != rhs {
                    u_fail = Some((n, k));
                    break 'uouter;
                }
            }
        }
        match u_fail {
            None => checks.push(CheckResult::pass("lattice_ratio_u")),
            Some((n, k)) => checks.push(CheckResult::fail(
                "lattice_ratio_u",
                format!("c({},{k}) den != c({n},{k}) num at ({n},{k})", n + 1),
                Some((n, k)),
            )),
        }
    }

    // three-term relation of the generated polynomials
    let mut tt_fail = None;
    let z = UniPoly::var(Symbol::Z);
    for n in 1..n_max {
        let alpha_n = fam.alpha.eval_u_only(&ExactScalar::int(n as i64));
        let beta_n = fam.beta.eval_u_only(&ExactScalar::int(n as i64));
        match (alpha_n, beta_n) {
            (Ok(a), Ok(bt)) => {
                let residual = &(&(&(&z * &seq.polys[n]) - &seq.polys[n + 1])
                    - &seq.polys[n].scale(&a))
                    - &seq.polys[n - 1].scale(&bt);
                if !residual.is_zero() {
                    tt_fail = Some((n, format!("residual {residual}")));
                    break;
                }
            }
            _ => {
                tt_fail = Some((n, "closed coefficient has a pole".into()));
                break;
            }
        }
    }
    match tt_fail {
        None => checks.push(CheckResult::pass("three_term_relation")),
        Some((n, why)) => checks.push(CheckResult::fail(
            "three_term_relation",
            format!("fails at n = {n}: {why}"),
            Some((n, 0)),
        )),
    }

    VerifyReport { checks, exceptional_points: exceptional }
}
