//! Matrix phases of n-port networks.
//!
//! The crate computes phases of complex matrices, sweeps rational impedance
//! matrices over the (indented) imaginary axis, implements the classical
//! network connections and their inverses, general connections described by
//! confluences, and randomized checks of the phase-preservation results.

pub mod confluence;
pub mod connections;
pub mod error;
pub mod harness;
pub mod interval;
pub mod linalg;
pub mod matrix;
pub mod network;
pub mod phase;
pub mod subtractions;

pub use error::{Error, Result};
pub use interval::PhaseInterval;
pub use matrix::{ComplexMatrix, Partition, RealMatrix};
pub use phase::{
    analyze, classify, hermitian_split, in_phase_set, numerical_range_support, phase_interval, phases,
    phases_semi, PhaseAnalysis, SectorialClass, SectorialDecomposition, SectorialTag, ANGLE_TOL, DEFAULT_TOL,
};
