//! Mission-level plumbing around `adr-core`: element-set ingestion, the
//! TOML configuration, and the plan / fly / tune / report workflows with
//! their CSV and JSON outputs.

pub mod config;
pub mod epoch;
pub mod error;
pub mod tle;
pub mod workflow;

pub use config::MissionConfig;
pub use error::{MissionError, Result};
pub use tle::{parse_tle, DebrisRecord};

use std::path::Path;

use adr_core::astro::Environment;

pub fn load_catalog(path: &Path, env: &Environment) -> Result<Vec<DebrisRecord>> {
    let text = std::fs::read_to_string(path).map_err(MissionError::io(path))?;
    parse_tle(&text, env)
}
