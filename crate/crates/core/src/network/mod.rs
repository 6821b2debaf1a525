//! Rational impedance matrices and their frequency-wise phases.

pub mod fixtures;
pub mod grid;
pub mod rational;
pub mod sweep;

pub use fixtures::{fig13_resistive, fig14_network, fig4_network};
pub use grid::{build_grid, log_space, FrequencyGrid, ARC_SAMPLES, DEFAULT_EPS, DEFAULT_PPD};
pub use rational::{
    imaginary_axis_poles, limit_at_infinity, value_at_infinity, InfinityLimit, RationalFunction,
    RationalMatrix, INFINITY_PROBE,
};
pub use sweep::{sweep, sweep_with, SweepPoint, SweepResult};
