//! Simulation toolkit for digitized adiabatic annealing on XY spin lattices.
//!
//! The crate is layered bottom-up:
//!
//! - [`sim`]: state vectors, density matrices, Pauli-term Hamiltonians with
//!   matrix-free action, dense spectra for small registers.
//! - [`model`]: Cayley trees and chains, staggered-field and flip-flop
//!   Hamiltonians, Néel states, interpolation schedules.
//! - [`annealing`]: exact analog evolution, gap analysis, the Trotter
//!   step-width bound, and digitization into per-block circuit angles.
//! - [`circuit`]: gate set, XY-interaction decompositions, block circuits,
//!   coherent and Kraus noise.
//! - [`measurement`]: energy, connected correlations, parity, distance
//!   profiles, randomized-measurement Rényi entropy, readout correction.
//!
//! Units: hbar = 1, energies in units of J0, time in units of 1/J0.

pub mod annealing;
pub mod circuit;
pub mod error;
pub mod measurement;
pub mod model;
pub mod sim;

pub use error::{Error, Result};
