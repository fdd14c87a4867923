//! Simulation and verification of remote information concentration: quantum
//! information diluted from one qubit into three spatially separated qubits
//! is pulled back onto a single distant qubit using only local Bell-state
//! measurements and classical messages, over either a four-partite GHZ
//! resource or the four-qubit Smolin (unlockable bound entangled) resource.
//!
//! The crate is organized along the protocol's layers:
//!
//! - [`qmath`]: dense complex state vectors, operators, measurement,
//!   partial trace/transpose, fidelities;
//! - [`states`]: the named states (input qubit, telecloning state, GHZ,
//!   Bell basis, Smolin resource);
//! - [`pauli`]: the Bell-outcome Pauli labeling and the correction algebra;
//! - [`protocol`]: sampled and exhaustive runs of the concentration
//!   protocol itself;
//! - [`analysis`]: exact distributions, leakage, bound-entanglement checks,
//!   and the all-invariant verifier;
//! - [`stats`]: goodness-of-fit testing for sampled distributions.

pub mod analysis;
pub mod error;
pub mod pauli;
pub mod protocol;
pub mod qmath;
pub mod states;
pub mod stats;
pub mod tol;

pub use error::{Error, Result};
