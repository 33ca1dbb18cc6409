use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cr_preimage::experiment::{error_exit_code, run_file, Command, RunOptions};
use cr_preimage::sets::DEFAULT_MAX_POINTS;

/// Block constructions, exact solving and witness transport for
/// combinatorially rich sets, driven by JSON configs.
#[derive(Parser)]
#[command(name = "cr-preimage", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build and verify divisibility blocks for a family of sequences.
    Blocks(Common),
    /// Clear denominators and solve A x = (a, ..., a) over the integers.
    Solve(Common),
    /// Run witness searches (sequence form, matrix form, J-set, piecewise syndetic, r estimates).
    Witness(Common),
    /// Transport witnesses from B to {y : A y in B^u} and verify the traces.
    Preimage(Common),
    /// Transport a decreasing chain through A and check shift indices on a box.
    Chain(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (or, with --verify-only, an earlier report).
    #[arg(long)]
    config: PathBuf,
    /// Where to write the JSON report; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Re-check the claims of a report instead of running searches.
    #[arg(long)]
    verify_only: bool,
    /// Replace every seed in the config.
    #[arg(long)]
    seed_override: Option<u64>,
    /// Cap on points visited by any window enumeration.
    #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
    max_points: u64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RWK_LOG_LEVEL", "warn")).init();
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Blocks(a) => (Command::Blocks, a),
        Cmd::Solve(a) => (Command::Solve, a),
        Cmd::Witness(a) => (Command::Witness, a),
        Cmd::Preimage(a) => (Command::Preimage, a),
        Cmd::Chain(a) => (Command::Chain, a),
    };
    let opts = RunOptions {
        verify_only: args.verify_only,
        seed_override: args.seed_override,
        max_points: args.max_points,
    };
    let report = match run_file(command, &args.config, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_exit_code(&e) as u8);
        }
    };
    let written = report.to_json().and_then(|json| match &args.out {
        Some(path) => std::fs::write(path, json).map_err(Into::into),
        None => {
            print!("{json}");
            Ok(())
        }
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    eprintln!("{}", report.human_summary());
    ExitCode::from(report.exit_code() as u8)
}
