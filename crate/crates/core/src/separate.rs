//! Detection of products of the form `kappa * q(s+u) * p(s-u)`.

use crate::bipoly::BiPoly;
use crate::error::ExactError;
use crate::scalar::ExactScalar;
use crate::unipoly::{Symbol, UniPoly};

/// A successful separation `x = kappa * q(s+u) * p(s-u)` with `p, q` monic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub kappa: ExactScalar,
    pub q: UniPoly,
    pub p: UniPoly,
}

/// Deterministic probe points in the `(a, b) = (s+u, s-u)` plane; a probe is
/// skipped when the transformed polynomial vanishes there.
const PROBES: [(i64, i64); 16] = [
    (1, 0),
    (0, 1),
    (2, 3),
    (5, 7),
    (11, 13),
    (17, 19),
    (23, 29),
    (31, 37),
    (41, 43),
    (47, 53),
    (59, 61),
    (67, 71),
    (73, 79),
    (83, 89),
    (97, 101),
    (103, 107),
];

/// Splits a nonzero polynomial `x(u, s)` as `kappa * q(s+u) * p(s-u)` with
/// monic `p` and `q`, or reports that no such splitting exists.
///
/// The change of variables `a := s+u`, `b := s-u` turns the question into
/// whether `T(a, b) := x((a-b)/2, (a+b)/2)` factors as a product of a
/// polynomial in `a` alone and one in `b` alone, which is equivalent to the
/// cross-product identity `T(a,b) * T(a0,b0) == T(a,b0) * T(a0,b)` at any
/// point with `T(a0, b0) != 0`.
pub fn separate_sum_diff(x: &BiPoly) -> Result<Separation, ExactError> {
    assert!(!x.is_zero(), "cannot separate the zero polynomial");
    let t = to_sum_diff_basis(x);

    let mut probe = None;
    for &(a0, b0) in PROBES.iter() {
        let a0 = ExactScalar::int(a0);
        let b0 = ExactScalar::int(b0);
        let v = t.eval(&a0, &b0);
        if !v.is_zero() {
            probe = Some((a0, b0, v));
            break;
        }
    }
    let (a0, b0, t00) = probe.ok_or(ExactError::ProbeFailure)?;

    // t.eval_s fixes the second variable, i.e. b := b0 here.
    let t_a = t.eval_s(&b0).with_symbol(Symbol::T);
    let t_b = t.eval_u(&a0).with_symbol(Symbol::T);

    let lhs = t.scale(&t00);
    let rhs = outer_product(&t_a, &t_b);
    if lhs != rhs {
        return Err(ExactError::NotSeparable);
    }

    let q = t_a.monic();
    let p = t_b.monic();
    let kappa = &t00 / &(&q.eval(&a0) * &p.eval(&b0));

    debug_assert_eq!(
        {
            let q_us = BiPoly::from_unipoly_subst(&q, 1, 1, &ExactScalar::zero());
            let p_us = BiPoly::from_unipoly_subst(&p, -1, 1, &ExactScalar::zero());
            (&q_us * &p_us).scale(&kappa)
        },
        *x,
        "reconstruction identity"
    );

    Ok(Separation { kappa, q, p })
}

/// `T(a, b) = x((a-b)/2, (a+b)/2)`, stored as a [`BiPoly`] whose first
/// variable plays the role of `a` and second of `b`.
fn to_sum_diff_basis(x: &BiPoly) -> BiPoly {
    let half = ExactScalar::ratio(1, 2);
    // u = (a - b)/2, s = (a + b)/2
    let u_expr = BiPoly::from_terms([
        ((1, 0), half.clone()),
        ((0, 1), -&half),
    ]);
    let s_expr = BiPoly::from_terms([
        ((1, 0), half.clone()),
        ((0, 1), half.clone()),
    ]);
    let du = x.deg_u() as usize;
    let ds = x.deg_s() as usize;
    let mut u_pows = vec![BiPoly::one()];
    for i in 1..=du {
        let next = &u_pows[i - 1] * &u_expr;
        u_pows.push(next);
    }
    let mut s_pows = vec![BiPoly::one()];
    for j in 1..=ds {
        let next = &s_pows[j - 1] * &s_expr;
        s_pows.push(next);
    }
    let mut out = BiPoly::zero();
    for (&(i, j), c) in x.terms() {
        let term = (&u_pows[i as usize] * &s_pows[j as usize]).scale(c);
        out = &out + &term;
    }
    out
}

fn outer_product(pa: &UniPoly, pb: &UniPoly) -> BiPoly {
    let mut out = Vec::new();
    for (i, ca) in pa.coeffs().iter().enumerate() {
        for (j, cb) in pb.coeffs().iter().enumerate() {
            out.push(((i as u32, j as u32), ca * cb));
        }
    }
    BiPoly::from_terms(out)
}
