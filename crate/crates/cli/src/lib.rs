//! Sweeps, measurement reduction and table output for the `larmor` binary.

pub mod error;
pub mod limits;
pub mod measurement;
pub mod sweep;
pub mod table;

pub use error::{PipelineError, Result};
