//! `leastgrad-lab`: batch front-end for the Cantor-arc construction, its
//! verification sweeps, and the discrete least-gradient scenarios.
//!
//! Exit codes: 0 success, 1 check failure, 2 misuse, 3 non-convergence.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "leastgrad-lab", version, about = "Fat Cantor construction and least-gradient lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration file (flat `key = value` with [sections]).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (default: ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report solver non-convergence in the output instead of exiting 3.
    #[arg(long, global = true)]
    allow_nonconverged: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Cantor tree; write its export and the construction figure.
    Build,
    /// Run the verification sweeps; nonzero exit iff any check fails.
    Verify,
    /// Run a least-gradient scenario (solver / extension / probes).
    Solve,
    /// Validate and summarize a previously written report file.
    Report,
}

/// `LEASTGRAD_THREADS` caps worker parallelism. All current execution paths
/// are sequential (determinism first), but the value is validated and
/// recorded so archived runs stay meaningful if parallel paths appear.
fn validate_threads_env() -> Result<(), String> {
    match std::env::var("LEASTGRAD_THREADS") {
        Err(_) => Ok(()),
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => Err(format!("LEASTGRAD_THREADS must be a positive integer, got {v:?}")),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = validate_threads_env() {
        eprintln!("error: {msg}");
        return ExitCode::from(commands::EXIT_MISUSE as u8);
    }

    let cfg = match &cli.config {
        None => config::RunConfig::default(),
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return ExitCode::from(commands::EXIT_MISUSE as u8);
                }
            };
            match config::load(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(commands::EXIT_MISUSE as u8);
                }
            }
        }
    };

    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let name = match cli.command {
        Command::Build => "build",
        Command::Verify => "verify",
        Command::Solve => "solve",
        Command::Report => "report",
    };
    if let Err(e) = commands::write_metadata(&out, name) {
        eprintln!("error: {e}");
        return ExitCode::from(commands::EXIT_MISUSE as u8);
    }

    let result = match cli.command {
        Command::Build => commands::cmd_build(&cfg, &out),
        Command::Verify => commands::cmd_verify(&cfg, &out),
        Command::Solve => commands::cmd_solve(&cfg, &out, cli.allow_nonconverged),
        Command::Report => commands::cmd_report(&cfg, &out),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::EXIT_MISUSE as u8)
        }
    }
}
