//! Errors shared by the exact-arithmetic layer.

use thiserror::Error;

use crate::scalar::ExactScalar;

/// Errors raised by scalar, polynomial and rational-function operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at (u, s) = ({u}, {s})")]
    PoleAtPoint { u: ExactScalar, s: ExactScalar },
    #[error("numerator and denominator both vanish at (u, s) = ({u}, {s})")]
    IndeterminateAtPoint { u: ExactScalar, s: ExactScalar },
    #[error("polynomial does not split as kappa * q(s+u) * p(s-u)")]
    NotSeparable,
    #[error("no usable probe point in the deterministic probe sequence")]
    ProbeFailure,
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
}
