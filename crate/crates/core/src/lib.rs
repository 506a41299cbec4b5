//! Reversible Boolean networks, their quantum extension with Hadamard gates,
//! and the spreading of perturbations through them.
//!
//! A network of `n` nodes runs on `2n` bits or qubits: targets `0..n` hold the
//! older values and are updated, controls `n..2n` hold the current values and
//! drive the logic, and a swap of the two registers ends every step.
//!
//! - [`netmodel`]: networks, truth tables, components, random ensembles.
//! - [`classical`]: bit-level dynamics, cycles, damage spreading.
//! - [`statevec`]: state vectors, dense propagators and their spectra.
//! - [`pauliframe`]: Pauli-frame propagation of the difference between two
//!   trajectories.
//! - [`experiments`]: ensemble averages, parallel with the `parallel` feature.
//! - [`export`]: CSV, SVG and PGM output.

pub mod classical;
pub mod error;
pub mod experiments;
pub mod export;
pub mod netmodel;
pub mod pauliframe;
pub mod statevec;

pub use error::{Error, Result};
pub use netmodel::{K1Kind, Network, Node, TruthTable};
pub use pauliframe::{Pauli, PauliFrame};
pub use statevec::StateVector;
