//! Lommel polynomials and their exact bridge to the two quartic
//! hypergeometric families.
//!
//! The polynomials satisfy `h_{n+1} = 2z(n+c) h_n - h_{n-1}` with `h_{-1} = 0`
//! and `h_0 = 1`; they are alternately even and odd. Substituting `-z^2` into
//! the monic degree-n members of the two families reproduces `h_{2n}` and
//! `h_{2n+1}` up to explicit scalar factors.

use crate::families::{series_polynomial, FamilyError, FamilySpec};
use crate::scalar::{binomial_big, ExactScalar};
use crate::unipoly::{Symbol, UniPoly};

/// `h_0 ..= h_{n_max}` by the three-term recursion.
pub fn lommel_recurrence(c: &ExactScalar, n_max: usize) -> Vec<UniPoly> {
    let z = Symbol::Z;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(UniPoly::one(z));
    if n_max == 0 {
        return out;
    }
    out.push(UniPoly::monomial(z, &ExactScalar::int(2) * c, 1));
    for n in 1..n_max {
        let factor = UniPoly::monomial(
            z,
            &ExactScalar::int(2) * &(c + &ExactScalar::int(n as i64)),
            1,
        );
        let next = &(&factor * &out[n]) - &out[n - 1];
        out.push(next);
    }
    out
}

/// `h_n` from the closed sums
/// `h_{2m} = sum_k (-1)^{m+k} C(m+k, 2k) (m+c-k)_{2k} (2z)^{2k}` and
/// `h_{2m+1} = sum_k (-1)^{m+k} C(m+k+1, 2k+1) (m+c-k)_{2k+1} (2z)^{2k+1}`.
pub fn lommel_explicit(c: &ExactScalar, n: usize) -> UniPoly {
    let m = n / 2;
    let mut coeffs = vec![ExactScalar::zero(); n + 1];
    for k in 0..=m {
        let sign = if (m + k) % 2 == 0 { ExactScalar::one() } else { ExactScalar::int(-1) };
        let base = &(c + &ExactScalar::int(m as i64)) - &ExactScalar::int(k as i64);
        if n % 2 == 0 {
            let binom = ExactScalar::from_bigint(binomial_big((m + k) as u64, 2 * k as u64));
            let poch = base.pochhammer(2 * k as u32);
            let two_pow = ExactScalar::int(2).pow(2 * k as i32);
            coeffs[2 * k] = &(&(&sign * &binom) * &poch) * &two_pow;
        } else {
            let binom = ExactScalar::from_bigint(binomial_big((m + k + 1) as u64, (2 * k + 1) as u64));
            let poch = base.pochhammer(2 * k as u32 + 1);
            let two_pow = ExactScalar::int(2).pow(2 * k as i32 + 1);
            coeffs[2 * k + 1] = &(&(&sign * &binom) * &poch) * &two_pow;
        }
    }
    UniPoly::new(Symbol::Z, coeffs)
}

/// Outcome of the bridge check between the Lommel polynomials and the two
/// families at one degree: the even identity compares `E_n(-z^2)` against
/// the scaled `h_{2n}`, the odd one compares `z F_n(-z^2)` against the
/// scaled `h_{2n+1}`, and the closed expansions of `E_n` and `F_n` are
/// rebuilt term-by-term.
#[derive(Debug, Clone)]
pub struct LommelBridge {
    pub e_lhs: UniPoly,
    pub e_rhs: UniPoly,
    pub f_lhs: UniPoly,
    pub f_rhs: UniPoly,
    pub e_equal: bool,
    pub f_equal: bool,
    pub expansions_equal: bool,
}

impl LommelBridge {
    pub fn all_equal(&self) -> bool {
        self.e_equal && self.f_equal && self.expansions_equal
    }
}

/// Checks the even and odd bridge identities and the closed expansions at
/// degree `n`.
pub fn check_lommel_bridge(c: &ExactScalar, n: usize) -> Result<LommelBridge, FamilyError> {
    let e_n = series_polynomial(&FamilySpec::family_e(c.clone()), n)?;
    let f_n = series_polynomial(&FamilySpec::family_f(c.clone()), n)?;
    let h = lommel_recurrence(c, 2 * n + 1);

    let minus_z2 = UniPoly::new(
        Symbol::Z,
        vec![ExactScalar::zero(), ExactScalar::zero(), ExactScalar::int(-1)],
    );
    let sign = if n % 2 == 0 { ExactScalar::one() } else { ExactScalar::int(-1) };

    // E_n(-z^2) = (-1)^n / (2^{2n} (c)_{2n}) * h_{2n}
    let e_lhs = e_n.compose_poly(&minus_z2);
    let e_scale = &sign / &(&ExactScalar::int(2).pow(2 * n as i32) * &c.pochhammer(2 * n as u32));
    let e_rhs = h[2 * n].scale(&e_scale);

    // z F_n(-z^2) = (-1)^n / (2^{2n+1} (c)_{2n+1}) * h_{2n+1}
    let f_lhs = &f_n.compose_poly(&minus_z2) * &UniPoly::var(Symbol::Z);
    let f_scale = &sign
        / &(&ExactScalar::int(2).pow(2 * n as i32 + 1) * &c.pochhammer(2 * n as u32 + 1));
    let f_rhs = h[2 * n + 1].scale(&f_scale);

    // closed expansions of the monic members
    let e_expansion = {
        let mut coeffs = vec![ExactScalar::zero(); n + 1];
        let norm = (&ExactScalar::int(2).pow(2 * n as i32) * &c.pochhammer(2 * n as u32))
            .recip()
            .map_err(|_| FamilyError::InvalidParams {
                reason: "pochhammer factor vanishes".into(),
            })?;
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let binom = ExactScalar::from_bigint(binomial_big((n + k) as u64, 2 * k as u64));
            let base = &(c + &ExactScalar::int(n as i64)) - &ExactScalar::int(k as i64);
            *slot = &(&(&binom * &base.pochhammer(2 * k as u32)) * &ExactScalar::int(2).pow(2 * k as i32))
                * &norm;
        }
        UniPoly::new(Symbol::Z, coeffs)
    };
    let f_expansion = {
        let mut coeffs = vec![ExactScalar::zero(); n + 1];
        let norm = (&ExactScalar::int(2).pow(2 * n as i32) * &c.pochhammer(2 * n as u32 + 1))
            .recip()
            .map_err(|_| FamilyError::InvalidParams {
                reason: "pochhammer factor vanishes".into(),
            })?;
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let binom =
                ExactScalar::from_bigint(binomial_big((n + k + 1) as u64, (2 * k + 1) as u64));
            let base = &(c + &ExactScalar::int(n as i64)) - &ExactScalar::int(k as i64);
            *slot = &(&(&binom * &base.pochhammer(2 * k as u32 + 1))
                * &ExactScalar::int(2).pow(2 * k as i32))
                * &norm;
        }
        UniPoly::new(Symbol::Z, coeffs)
    };

    Ok(LommelBridge {
        e_equal: e_lhs == e_rhs,
        f_equal: f_lhs == f_rhs,
        expansions_equal: e_expansion == e_n && f_expansion == f_n,
        e_lhs,
        e_rhs,
        f_lhs,
        f_rhs,
    })
}

/// Rebuilds `h_0 ..= h_{n_max}` from the two families: even members from
/// `E_{n/2}(-z^2)`, odd members from `z F_{(n-1)/2}(-z^2)`, each multiplied
/// by the normalization factor `2^n (c)_n` that the bare substitution omits.
/// The result is asserted equal to the recursion output and to satisfy the
/// interleaved recursion `G_{n+1} = 2(c+n) z G_n - G_{n-1}`.
pub fn lommel_via_ef(c: &ExactScalar, n_max: usize) -> Result<Vec<UniPoly>, FamilyError> {
    let minus_z2 = UniPoly::new(
        Symbol::Z,
        vec![ExactScalar::zero(), ExactScalar::zero(), ExactScalar::int(-1)],
    );
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let m = n / 2;
        let sign = if m % 2 == 0 { ExactScalar::one() } else { ExactScalar::int(-1) };
        let norm = &ExactScalar::int(2).pow(n as i32) * &c.pochhammer(n as u32);
        let g = if n % 2 == 0 {
            let e_m = series_polynomial(&FamilySpec::family_e(c.clone()), m)?;
            e_m.compose_poly(&minus_z2).scale(&(&sign * &norm))
        } else {
            let f_m = series_polynomial(&FamilySpec::family_f(c.clone()), m)?;
            (&f_m.compose_poly(&minus_z2) * &UniPoly::var(Symbol::Z)).scale(&(&sign * &norm))
        };
        out.push(g);
    }
    let h = lommel_recurrence(c, n_max);
    for (n, (g, hn)) in out.iter().zip(h.iter()).enumerate() {
        assert_eq!(g, hn, "interleaved member {n} disagrees with the recursion");
    }
    for n in 1..n_max {
        let factor = UniPoly::monomial(
            Symbol::Z,
            &ExactScalar::int(2) * &(c + &ExactScalar::int(n as i64)),
            1,
        );
        let residual = &(&(&factor * &out[n]) - &out[n - 1]) - &out[n + 1];
        assert!(residual.is_zero(), "interleaved recursion fails at n = {n}");
    }
    Ok(out)
}
