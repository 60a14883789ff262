//! Kochen-Specker ray colorings.
//!
//! Rays stand for squared spin-1 components. An orthogonal triad must hold
//! exactly one blue (value 0) and two red (value 1) rays. An orthogonal
//! pair outside any listed triad may hold at most one blue.

pub mod construct;
pub mod instance;
pub mod qsqrt2;
pub mod ray;
pub mod search;

pub use construct::{bell_gadget, bell_uncolorable_set, peres_33};
pub use instance::{Color, ColoringInstance, Coloring, DEFAULT_TOLERANCE};
pub use qsqrt2::QSqrt2;
pub use ray::{dot, orthogonal, parse_ray_file, write_ray_file, Mode, Ray, Scalar};
pub use search::{search_coloring, search_coloring_pinned, ColoringOutcome};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KsError {
    #[error("zero vector is not a direction")]
    ZeroVector,
    #[error("exact and approximate rays cannot be mixed")]
    MixedModes,
    #[error("no rays given")]
    Empty,
    #[error("orthogonality tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("{0}")]
    Domain(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}
