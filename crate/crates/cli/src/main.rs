//! Command-line front end: parses a run configuration, dispatches one
//! subcommand, and writes its CSV to stdout or a file.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{run_scan, run_simulate, run_validate, CmdError, CmdOutput};
use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "qnetcost",
    version,
    about = "Cost analysis of entangled versus independent phase estimation \
             over a star network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan network sizes for the window where entanglement wins.
    Scan(CommonArgs),
    /// Simulate the distribution protocol and report final fidelities.
    Simulate(CommonArgs),
    /// Compare sampled estimator spreads against the analytic precision.
    Validate(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Writes the CSV here instead of stdout or the configured path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&CommonArgs, fn(&RunConfig) -> Result<CmdOutput, CmdError>) =
        match &cli.command {
            Command::Scan(args) => (args, run_scan),
            Command::Simulate(args) => (args, run_simulate),
            Command::Validate(args) => (args, run_validate),
        };

    let text = match std::fs::read_to_string(&args.config) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let mut config = match config::parse_config(&text) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }

    let output = match run(&config) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(note) = &output.note {
        eprintln!("{note}");
    }

    let target = args
        .out
        .clone()
        .or_else(|| config.output_path.as_ref().map(PathBuf::from));
    match target {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, output.csv) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{}", output.csv),
    }
    ExitCode::SUCCESS
}
