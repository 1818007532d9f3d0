//! Experiment runner for the treeanneal toolkit: one subcommand per
//! experiment, TOML configuration, CSV/JSON outputs and a checksum manifest.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::Path;
use std::time::Instant;

pub use commands::{run_command, Command};
pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use output::{Outputs, RunInfo, RunManifest, Table};

/// Runs `cmd` and writes its outputs plus `manifest.json` into `out_dir`.
pub fn execute(cmd: Command, cfg: &ExperimentConfig, out_dir: &Path) -> CliResult<RunManifest> {
    let start = Instant::now();
    let outputs = run_command(cmd, cfg)?;
    let run = RunInfo {
        command: cmd.name().to_string(),
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        config: ExperimentConfig { output: Default::default(), ..cfg.clone() },
    };
    outputs.write(out_dir, run, start.elapsed().as_secs_f64())
}
