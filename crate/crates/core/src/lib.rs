//! Simulator for the wave-particle toolbox: a polarization qubit steers a
//! photon into a superposition of interfering and non-interfering behavior,
//! and parallel toolboxes turn polarization entanglement into wave-particle
//! entanglement.
//!
//! Modules build on each other from the bottom up:
//!
//! - [`qcore`]: labeled bases, pure states, density matrices, Born rule.
//! - [`optics`]: element unitaries and the conceptual toolbox circuit.
//! - [`toolbox`]: single-photon closed forms, coherence and its witness.
//! - [`entangle`]: two-photon and N-photon outputs, coincidences, concurrence.
//! - [`hardware`]: the beam-displacer layout and its equivalence check.
//! - [`shots`]: finite-count sampling and detector noise.
//! - [`sweep`]: parameter sweeps, tables and the `verify` suite used by the CLI.

pub mod entangle;
pub mod error;
pub mod hardware;
pub mod optics;
pub mod qcore;
pub mod shots;
pub mod sweep;
pub mod toolbox;

pub use error::{Error, Result};
