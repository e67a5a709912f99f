use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

/// Completion, geometric means and sweeps for partial positive definite
/// matrices.
#[derive(Debug, Parser)]
#[command(name = "pgm", version, about)]
struct Cli {
    /// Convergence tolerance for maximum-determinant completions.
    #[arg(long, global = true, env = "PGM_TOL", default_value_t = 1e-10)]
    tol: f64,

    /// Cap on full cycles of the completion iteration.
    #[arg(long, global = true, default_value_t = 500)]
    max_cycles: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chordality, partial definiteness and completability of a pattern.
    Check { file: PathBuf },

    /// Maximum-determinant positive definite completion.
    Complete {
        file: PathBuf,
        /// Write the completion in the input format (17 significant digits).
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Weighted geometric mean of the maximum-determinant completions.
    Geomean {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Weighted Karcher mean of the completions of several files.
    Karcher {
        /// Comma-separated positive weights, rescaled to sum to one.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },

    /// Gaussian entropy of the completion; with two files, the entropy
    /// identities along the segment and the geodesic.
    Entropy {
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
    },

    /// Determinant and eigenvalues of A(x) #ₜ B(y) over the feasible grid.
    Sweep {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        /// CSV destination.
        #[arg(long, required = true)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
