//! Experiment harness for the fixed-point search simulator: configuration,
//! the named experiments, CSV/SVG output and the invariant suite.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod svg;
pub mod verify;

pub use config::{Experiment, ExperimentConfig};
pub use error::{HarnessError, Result};
pub use output::Artifact;

/// Runs `config` and writes its artifacts to `config.output_dir`.
pub fn run_and_write(config: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let artifacts = experiments::run(config)?;
    output::write_artifacts(&config.output_dir, &artifacts)?;
    Ok(artifacts)
}
