use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use warpcheck_cli::{run, Command, Options, Scenario};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    /// Print the curvature bundle at the scenario's points.
    Curvature,
    /// Einstein residual, closed-form agreement and constancy checks.
    Verify,
    /// Map a Λ̄ and fiber dimension to the GRW families.
    Classify,
    /// Stated constants against coordinate evidence, per family.
    Discrepancies,
}

/// Verification engine for warped-product Einstein metrics.
#[derive(Debug, Parser)]
#[command(name = "warpcheck", version)]
struct Args {
    command: Cmd,
    /// Scenario file (JSON, `"version": 1`).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory for report files.
    #[arg(long, default_value = "warpcheck-out")]
    out: PathBuf,
    /// Override the sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of sample points.
    #[arg(long)]
    samples: Option<usize>,
    /// Override the residual and closed-form tolerances.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        Cmd::Curvature => Command::Curvature,
        Cmd::Verify => Command::Verify,
        Cmd::Classify => Command::Classify,
        Cmd::Discrepancies => Command::Discrepancies,
    };
    let opts = Options {
        out: args.out,
        seed: args.seed,
        samples: args.samples,
        tol: args.tol,
    };
    let result = Scenario::load(&args.scenario).and_then(|s| run(command, &s, &opts));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
