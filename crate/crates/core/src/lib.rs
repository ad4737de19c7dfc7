//! Finite-difference laboratory for obstacle problems and one-phase Stefan
//! flows on box domains in dimension 1, 2 and 3.
//!
//! The crate solves the discrete elliptic obstacle problem as a linear
//! complementarity system (projected SOR), time-steps the parabolic obstacle
//! problem implicitly, extracts contact sets and free-boundary points,
//! classifies free-boundary points as regular or singular by fitting blow-up
//! profiles, evaluates the monotonicity functional used to certify singular
//! points, and drives two experiment pipelines: a genericity sweep over
//! shifted boundary data and a singular-times detector for melting runs.
//!
//! Everything is deterministic: no randomness, fixed iteration orders,
//! reproducible reports. The numerics are generic over the scalar type via
//! [`Real`]; the aliases below pin `f64`, which is what the CLI and the test
//! suite use.

pub mod blowup;
pub mod config;
pub mod elliptic;
pub mod error;
pub mod experiments;
pub mod expr;
pub mod freeboundary;
pub mod grid;
pub mod linalg;
pub mod monotonicity;
pub mod parabolic;
pub mod scalar;
pub mod store;

pub use error::Error;
pub use scalar::Real;

/// `f64` instantiations of the main types.
pub type Grid64 = grid::Grid<f64>;
pub type Field64 = grid::ScalarField<f64>;
pub type LcpProblem64 = elliptic::LcpProblem<f64>;
pub type SolveStats64 = elliptic::SolveStats<f64>;
pub type Trajectory64 = parabolic::Trajectory<f64>;
pub type ContactGeometry64 = freeboundary::ContactGeometry<f64>;
pub type BlowupSample64 = blowup::BlowupSample<f64>;
pub type Thresholds64 = blowup::Thresholds<f64>;
pub type ClassificationReport64 = blowup::ClassificationReport<f64>;
pub type MonneauCurve64 = monotonicity::MonneauCurve<f64>;

/// `f32` instantiations, for callers that trade precision for memory.
pub type Grid32 = grid::Grid<f32>;
pub type Field32 = grid::ScalarField<f32>;
