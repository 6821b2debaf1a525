//! Random generators and property suites for the phase results.

pub mod generators;
pub mod suites;

pub use generators::{
    random_confluence_with, random_interval, random_passive_network, random_passive_network_with,
    random_sectorial, random_sectorial_with, trial_rng,
};
pub use suites::{run_suite, Report, Section, SUITES};
