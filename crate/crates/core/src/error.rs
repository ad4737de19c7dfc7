//! Shared error type.

use crate::elliptic::SolveStats;
use crate::grid::ScalarField;
use crate::scalar::Real;

/// Everything that can fail across the crate. The scalar parameter matches
/// the field type carried by the non-convergence variant; modules that never
/// carry a field use the `f64` default.
#[derive(Debug, thiserror::Error)]
pub enum Error<T: Real = f64> {
    #[error("grid needs at least {need} nodes per axis, got {got}")]
    GridTooSmall { need: usize, got: usize },

    #[error("dimension {0} unsupported: handled dimensions are 1, 2 and 3")]
    BadDimension(usize),

    #[error("point ({}, {}, {}) lies outside the grid box", .0[0], .0[1], .0[2])]
    OutOfDomain([f64; 3]),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error(
        "projected SOR stopped at residual {:e} after {} sweeps (tolerance not reached)",
        stats.final_residual, stats.iterations
    )]
    NonConvergence {
        /// Last iterate, returned so callers can inspect or restart.
        field: Box<ScalarField<T>>,
        stats: SolveStats<T>,
    },

    #[error("boundary schedule decreases in time: {0}")]
    NonMonotoneSchedule(String),

    #[error("resolution too coarse: {0}")]
    Resolution(String),

    #[error("not a free-boundary point: u{point:?} = {value} exceeds the contact threshold")]
    NotFreeBoundary { point: [f64; 3], value: f64 },

    #[error("need at least {need} time levels, got {got}")]
    TooFewTimes { need: usize, got: usize },

    #[error("bad file format: {0}")]
    Format(String),

    #[error(transparent)]
    Expr(#[from] crate::expr::ParseError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
