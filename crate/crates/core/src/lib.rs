//! Component-based MOEA/D.
//!
//! Every algorithmic role (decomposition, scalarization, neighborhood,
//! variation, update, constraint handling, termination) is a separate,
//! swappable component. [`engine::run_moead`] assembles them into the main loop.

pub mod config;
pub mod constraints;
pub mod decomposition;
pub mod engine;
pub mod error;
pub mod extensions;
pub mod metrics;
pub mod neighborhood;
pub mod params;
pub mod problems;
pub mod registry;
pub mod scalarization;
pub mod termination;
pub mod update;
pub mod variation;

pub use config::{preset, AlgorithmConfig, AlgorithmSpec};
pub use engine::{run_moead, run_moead_with, RunResult};
pub use error::{Error, Result};
pub use registry::Registry;
