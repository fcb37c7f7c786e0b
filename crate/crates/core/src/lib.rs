//! Discrete-time coined quantum walk on a line.
//!
//! Two independent back-ends compute the same walk:
//!
//! * [`walk`] is a dense coin ⊗ position state-vector engine.
//! * [`optics`] compiles the walk into a layered network of polarizing beam
//!   splitters and half-wave plates and pushes a single-photon amplitude
//!   through it.
//!
//! [`decoherence`] adds seeded random-phase trajectory ensembles that
//! interpolate between the coherent walk and the classical binomial walk, and
//! [`stats`] holds the distribution type plus the moments and distances used
//! to compare them. The [`cli`] module backs the `qwalk` binary.

pub mod cli;
pub mod decoherence;
pub mod error;
pub mod optics;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use stats::Distribution;
pub use walk::{CoinOperator, CoinVector, InitialSpec, WalkState};

/// Complex amplitude type used throughout the crate.
pub type Complex = num_complex::Complex64;
