//! `dmetric`: experiments on the disagreement distance between classifier
//! networks. Subcommands read a JSON experiment config and emit
//! deterministic, plot-ready CSV/JSON.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dmetric", version, about = "Disagreement-distance experiments for classifier networks")]
struct Cli {
    /// Override the seed in the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pairwise distance tables: Euclidean and estimated d_mu per measure.
    Tables {
        #[arg(long)]
        config: PathBuf,
        /// Directory for report.json and the CSV tables.
        #[arg(long)]
        out: PathBuf,
    },
    /// Distance field over a two-parameter grid, against a reference network.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Density bound kappa per measure, with a measured density maximum.
    Kappa {
        #[arg(long)]
        config: PathBuf,
    },
    /// Distances from a center network to random parameter-ball neighbors.
    Probe {
        #[arg(long)]
        config: PathBuf,
        /// Name of the center network in the config.
        #[arg(long)]
        center: String,
        /// Euclidean radius of the neighbor ball in parameter space.
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        neighbors: usize,
    },
}

/// Failures split by exit code: 2 for config/argument problems, 3 for
/// runtime failures.
pub enum CliError {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

pub type CliResult<T> = Result<T, CliError>;

pub fn config_err(e: anyhow::Error) -> CliError {
    CliError::Config(e)
}

pub fn runtime_err<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Runtime(e.into())
}

fn main() -> ExitCode {
    // Die quietly instead of panicking when stdout is a pipe that closes
    // early, e.g. `dmetric probe ... | head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let config_path = match &cli.command {
        Command::Tables { config, .. }
        | Command::Sweep { config, .. }
        | Command::Kappa { config }
        | Command::Probe { config, .. } => config.clone(),
    };
    let mut config = config::load(&config_path).map_err(config_err)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let resolved = config::resolve(config).map_err(config_err)?;
    match &cli.command {
        Command::Tables { out, .. } => commands::cmd_tables(&resolved, out),
        Command::Sweep { out, .. } => commands::cmd_sweep(&resolved, out),
        Command::Kappa { .. } => commands::cmd_kappa(&resolved),
        Command::Probe { center, radius, neighbors, .. } => {
            commands::cmd_probe(&resolved, center, *radius, *neighbors)
        }
    }
}
