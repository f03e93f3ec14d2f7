//! `gauss-bounds`: batch front end over the Gaussian matrix-element,
//! optimization, and eigenvalue-bound pipelines.
//!
//! Exit codes: 0 on success, 2 for configuration problems, 3 for numerical
//! failures (a failing kernel check, an optimizer stall, or an inconsistent
//! bound input).

mod commands;
mod config;
mod integrals;
mod pipeline;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Run(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Run(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Run(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "gauss-bounds",
    version,
    about = "Correlated-Gaussian matrix elements, variational optimization, and ground-state energy bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides every seed in the configuration.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Worker thread cap; falls back to GAUSS_BOUNDS_THREADS, then 1.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Directory for reports, basis files, and traces.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check every matrix-element kernel against its integration oracle on
    /// sample basis pairs.
    Integrals,
    /// Stochastically optimize the nonlinear basis parameters and write the
    /// basis set plus its energy trace.
    Optimize,
    /// Assemble H, S, and H-squared, solve the pencil, and report upper and
    /// lower energy bounds.
    Bounds,
    /// Run the full built-in oracle regression on canonical systems.
    Verify,
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, CliError> {
    let threads = match flag {
        Some(n) => n,
        None => match std::env::var("GAUSS_BOUNDS_THREADS") {
            Ok(text) => text.trim().parse::<usize>().map_err(|_| {
                CliError::Config(format!(
                    "GAUSS_BOUNDS_THREADS must be a positive integer (got {text:?})"
                ))
            })?,
            Err(_) => 1,
        },
    };
    if threads == 0 {
        return Err(CliError::Config("thread count must be positive".into()));
    }
    Ok(threads)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let threads = resolve_threads(cli.threads)?;
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", cli.out.display())))?;

    let load = |required_for: &str| -> Result<config::RunConfig, CliError> {
        let path = cli.config.as_ref().ok_or_else(|| {
            CliError::Config(format!("--config is required for the {required_for} subcommand"))
        })?;
        config::load_config(path, cli.seed, threads)
    };

    match cli.command {
        Command::Integrals => commands::cmd_integrals(&load("integrals")?, &cli.out),
        Command::Optimize => commands::cmd_optimize(&load("optimize")?, &cli.out),
        Command::Bounds => commands::cmd_bounds(&load("bounds")?, &cli.out),
        Command::Verify => {
            let cfg = match &cli.config {
                Some(path) => Some(config::load_config(path, cli.seed, threads)?),
                None => None,
            };
            commands::cmd_verify(cfg.as_ref(), threads, &cli.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
