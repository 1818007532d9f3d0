use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use treeanneal_cli::{execute, CliError, Command, ExperimentConfig};

/// Digitized adiabatic annealing experiments on XY spin lattices.
#[derive(Debug, Parser)]
#[command(name = "treeanneal", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// TOML configuration; defaults are used for missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (overrides the config file).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = args.out {
        cfg.output = out;
    }
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let manifest = execute(args.command, &cfg, &cfg.output)?;
    println!(
        "{}: wrote {} files to {} in {:.2} s",
        args.command.name(),
        manifest.outputs.len() + 1,
        cfg.output.display(),
        manifest.wall_clock_seconds
    );
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
