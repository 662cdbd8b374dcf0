//! `finetti`: POVM constants, tomography round-trips, de Finetti experiments
//! and the self-test suite.
//!
//! Exit codes: 0 on success, 2 for usage, parse, configuration and cap
//! errors, 3 when a checked inequality is violated.

mod definetti;
mod output;
mod povm;
mod selftest;
mod tomography;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "finetti", version, about = "Finite de Finetti bounds for symmetric quantum states")]
struct Cli {
    /// Worker threads for the parallel enumeration.
    #[arg(long, global = true, env = "FINETTI_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a POVM or report its constants.
    Povm(povm::PovmArgs),
    /// Reconstruct a state from its exact or perturbed statistics.
    Tomography(tomography::TomographyArgs),
    /// Run a de Finetti experiment from a TOML config.
    Definetti(definetti::DefinettiArgs),
    /// Run the acceptance suite.
    Selftest(selftest::SelftestArgs),
}

/// Inequalities that failed, each rendered with both sides.
pub(crate) type Violations = Vec<String>;

fn run(cli: Cli) -> anyhow::Result<Violations> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Povm(args) => povm::run(args),
        Command::Tomography(args) => tomography::run(args),
        Command::Definetti(args) => definetti::run(args),
        Command::Selftest(args) => selftest::run(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(v) if v.is_empty() => ExitCode::SUCCESS,
        Ok(v) => {
            for line in v {
                eprintln!("violated: {line}");
            }
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
