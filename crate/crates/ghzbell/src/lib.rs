//! Simulator for three entanglement protocols sharing one composite
//! channel built from a GHZ triple and `N - 1` Bell pairs:
//!
//! - superdense coding carrying `2N + 1` classical bits on `N + 1`
//!   transmitted qubits ([`superdense`]),
//! - deterministic teleportation of an arbitrary `N`-qubit state
//!   ([`teleport`]),
//! - three-party information splitting where the receiver needs both
//!   senders' outcomes to recover the secret ([`qis`]).
//!
//! States are dense complex vectors ([`statevec`]) over either `f32` or
//! `f64` via the [`Scalar`] trait; the aliases at the crate root fix the
//! default `f64` precision. Qubit positions are 1-based with position 1 the
//! leftmost ket symbol, so `|01>` puts qubit 1 in `|0>`. Everything random
//! flows through explicit seeded generators, making every run replayable.

pub mod bases;
pub mod cli;
mod eigen;
pub mod error;
pub mod qis;
pub mod scalar;
pub mod statevec;
pub mod superdense;
pub mod teleport;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default-precision state vector.
pub type StateVector = statevec::StateVector<f64>;
/// Default-precision density matrix.
pub type DensityMatrix = statevec::DensityMatrix<f64>;
/// Default-precision measurement basis.
pub type MeasurementBasis = statevec::MeasurementBasis<f64>;
/// Default-precision measurement record.
pub type Measurement = statevec::Measurement<f64>;
