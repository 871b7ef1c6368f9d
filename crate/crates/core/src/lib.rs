//! Exact construction, verification and classification of quasi-orthogonal
//! polynomial families whose successive-coefficient ratios
//! `c(n, k+1) / c(n, k)` are given by a fixed bivariate rational function
//! `f(u, s)` evaluated at `(n, k)`.
//!
//! When the reduced denominator of `f` does not involve `u`, exactly five
//! families exist up to rescaling and renormalization: Jacobi, Laguerre and
//! Bessel, plus two one-parameter families tied to Lommel polynomials and
//! discretely orthogonal on the reciprocal zeros of Bessel functions. The
//! crate builds each family by three independent methods (truncated series,
//! coefficient products of `f`, and the three-term recurrence), cross-checks
//! them bit-exactly, solves the inverse problem of recognizing a family from
//! its ratio function, decomposes general ratios into a
//! `(kappa, p, q, w, g)` normal form, and verifies the discrete
//! orthogonality sums numerically. Everything symbolic runs over
//! arbitrary-precision rationals.

pub mod bessel;
pub mod bipoly;
pub mod birat;
pub mod classify;
pub mod error;
pub mod families;
pub mod gauge;
pub mod lommel;
pub mod parser;
pub mod scalar;
pub mod separate;
pub mod unipoly;

pub use bessel::{
    bessel_j, bessel_zeros, discrete_gram_e, discrete_gram_f, eval_poly_f64, tail_bound_estimate,
    BesselError, GramTerm,
};
pub use bipoly::{BiPoly, Var};
pub use birat::{reduce, BiRat};
pub use classify::{
    classify_jacobi_type, decompose_ratio, ClassifyError, ClassifyResult, NormalForm,
};
pub use error::ExactError;
pub use families::{
    actual_recurrence_coeffs, alpha_beta_from_ratio, assemble, beta_one_from_ratio,
    coefficients_from_ratio, euler_operator_residual, family_moments, generate, gram_matrix,
    moments_from_recurrence, recurrence_generate, recurrence_generate_unchecked,
    series_polynomial, truncated_pfq, FamilyError, FamilyKind, FamilySpec, GenMethod, PolySeq,
    Provenance,
};
pub use gauge::{
    apply_gauge, ef_interpolation_family, gauge_polynomial, gauged_jacobi_family,
    jacobi_partner_difference, seq_from_ratio, shift_compatible, u_direction_ratio,
    verify_rational_family, CheckResult, GaugeError, RationalFamily, VerifyReport,
};
pub use lommel::{
    check_lommel_bridge, lommel_explicit, lommel_recurrence, lommel_via_ef, LommelBridge,
};
pub use parser::parse_poly_expr;
pub use scalar::ExactScalar;
pub use separate::{separate_sum_diff, Separation};
pub use unipoly::{gcd_unipoly, pochhammer_poly, Symbol, UniPoly};
