//! Simulation and verification toolkit for Hegselmann-Krause
//! bounded-confidence opinion dynamics.
//!
//! * [`model`] runs the synchronous averaging dynamics in exact rational or
//!   floating-point arithmetic and detects when a configuration freezes.
//! * [`configs`] builds the named starting configurations and reads
//!   configuration files.
//! * [`gaps`] tracks the gap vector of the dumbbell-with-chain configuration
//!   and checks its linear update rule and perturbation bounds.
//! * [`walks`] computes exact hitting counts of lazy walks on paths and cycles
//!   and the associated recurrences.
//! * [`harness`] contains sweeps, power-law fits, CSV emission and the
//!   verification suites used by the `hkf` binary.

pub mod configs;
pub mod gaps;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod walks;

pub use model::{
    clusters, is_frozen, neighbours, receptivity, simulate, step, Cluster, Configuration,
    ReceptivityGraph, SimulationResult,
};
pub use scalar::{NumericMode, Rational, Scalar, Tolerances};
