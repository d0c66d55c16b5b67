//! Single-qubit linear algebra: 2×2 complex matrices, density matrices,
//! Kraus channels and projective measurement.

mod kraus;
mod matrix;
mod measurement;
mod state;

pub use kraus::{apply_channel, KrausSet};
pub use matrix::{ComplexMat2, C64};
pub use measurement::{measure, observable, Observable, Outcome, Projector};
pub use state::DensityMatrix;

/// Tolerance for validity invariants (trace, hermiticity, positivity,
/// completeness) of objects this crate constructs.
pub const VALIDITY_TOL: f64 = 1e-12;

/// Inputs violating an invariant by more than this are rejected.
pub const REJECT_TOL: f64 = 1e-9;

/// Outcome probabilities at or below this are treated as zero.
pub const PROBABILITY_FLOOR: f64 = 1e-15;
