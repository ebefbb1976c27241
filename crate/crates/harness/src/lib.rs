//! Experiment grids, metrics, significance testing and result files for team
//! negotiation simulations.

pub mod cli;
pub mod error;
pub mod files;
pub mod grid;
pub mod metrics;
pub mod runner;
pub mod stats;
pub mod summary;

pub use error::{HarnessError, Result};
pub use grid::{Environment, ExperimentCell, GridSpec, Sampling};
pub use runner::{Experiment, NegotiationKey, ResultRow};
pub use summary::{summarize, CellSummary, Grouping};
