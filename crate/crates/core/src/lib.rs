//! Dense density-operator simulation of repeated partial measurement.
//!
//! A composite state is measured part by part: the entropy of every part is
//! recorded and the state is replaced by the product of its marginals, then
//! evolved unitarily under a random Hamiltonian until the next measurement.
//! The recorded entropies form a sequence that can be checked for
//! monotonicity, together with the information identities that hold at each
//! step.
//!
//! Modules:
//!
//! - [`linalg`]: complex dense matrices, Jacobi eigensolver, Kronecker products.
//! - [`state`]: density operators, Haar unitaries, random states.
//! - [`composite`]: partitions, partial traces, collapse to product states.
//! - [`measures`]: information, partition entropy, basis and correlation information.
//! - [`classical`]: the classical inequalities behind subadditivity.
//! - [`dynamics`]: random Hamiltonians, evolution, the cycle experiment.
//! - [`audit`]: randomized suites for the inequalities and invariants.
//! - [`io`]: CSV and JSON trajectory output.

pub mod audit;
pub mod classical;
pub mod composite;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod rng;
pub mod state;

pub use error::{Error, Result};
