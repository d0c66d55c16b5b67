//! Leggett-Garg temporal correlations of a single qubit under random
//! telegraph noise (RTN) and Ornstein-Uhlenbeck noise (OUN).
//!
//! The crate is organized bottom-up:
//!
//! * [`qubit`]: 2×2 complex matrices, density matrices, Kraus channels and
//!   projective measurement.
//! * [`noise`]: decoherence functions Λ(ν) and q(t), the Kraus sets built
//!   from them, and Markovian/non-Markovian classification.
//! * [`correlators`]: two-time correlators (measurement chain, expansion
//!   and closed form) and the LG parameters K₃ and K₃′.
//! * [`extrema`]: stationarity conditions of K₃(Δt), bracketing root
//!   finding, and grid maximization / violation census.
//! * [`cli`]: configuration, output records and the `lgsim` subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod correlators;
pub mod error;
pub mod extrema;
pub mod noise;
pub mod qubit;

pub use correlators::{
    correlator_chain, correlator_closed, correlator_expansion, k3, k3_by_chain, k3_prime_value,
    k3_unitary, k3_value, CorrelatorTriple, LGResult, MeasurementSetting,
};
pub use error::{LgError, Result};
pub use noise::{classify_regime, NoiseChannel, OunParams, RegimeTag, RtnParams};
pub use qubit::{apply_channel, measure, observable, ComplexMat2, DensityMatrix, KrausSet, Projector};
