//! `spectral-interp`: command-line driver for weighted minimum-norm
//! interpolation experiments.

mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spectral_interp::io::write_atomic;

use commands::{Context, Output};
use config::ExperimentConfig;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "spectral-interp",
    version,
    about = "Minimum-norm interpolation in spectrally weighted spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory receiving all output files.
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Tabulate the reproducing kernel next to the uniform-weight sinc kernel.
    Kernel,
    /// Reconstruct one sample set with several methods.
    Compare,
    /// Tabulate center cardinal functions.
    Cardinals,
    /// Power function and pointwise error bounds.
    Bounds,
    /// Monte-Carlo MSE for a stationary process.
    Mc,
    /// Fit a weight spec to a tabulated density.
    Fit,
}

const DEFAULT_SEED: u64 = 0;

fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let config = ExperimentConfig::load(path)?;
    let seed = cli.seed.or(config.seed).unwrap_or(DEFAULT_SEED);
    let ctx = Context { config, seed };
    let outputs = match cli.command {
        Command::Kernel => commands::kernel(&ctx),
        Command::Compare => commands::compare(&ctx),
        Command::Cardinals => commands::cardinals(&ctx),
        Command::Bounds => commands::bounds(&ctx),
        Command::Mc => commands::mc(&ctx),
        Command::Fit => commands::fit(&ctx),
    }?;
    write_outputs(&cli.output_dir, outputs)
}

fn write_outputs(dir: &Path, outputs: Vec<Output>) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::with_capacity(outputs.len());
    for (name, bytes) in outputs {
        let path = dir.join(&name);
        write_atomic(&path, &bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            if !cli.quiet {
                for p in paths {
                    eprintln!("wrote {}", p.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("spectral-interp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
