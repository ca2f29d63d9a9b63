//! The synchronous bounded-confidence dynamics.
//!
//! Opinions live in a [`Configuration`], generic over the numeric backend.
//! [`step`] applies one synchronous averaging update, [`receptivity`] and
//! [`clusters`] describe the interaction structure, and [`simulate`] iterates
//! until the configuration freezes.

mod config;
mod dynamics;
mod graph;
mod simulate;

pub use config::{ConfigError, Configuration};
pub use dynamics::{neighbours, step};
pub use graph::{clusters, is_frozen, receptivity, Cluster, Edge, ReceptivityGraph};
pub use simulate::{default_max_steps, simulate, SimulationResult, TopologyEvent};
