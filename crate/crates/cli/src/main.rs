mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Failure;

fn seed_override(flag: u64) -> Result<u64, Failure> {
    match std::env::var("MINFX_SEED") {
        Ok(s) if !s.trim().is_empty() => s.trim().parse().map_err(|_| {
            Failure::usage(format!("MINFX_SEED='{s}' is not a 64-bit unsigned integer"))
        }),
        _ => Ok(flag),
    }
}

fn run(cli: Cli) -> Result<serde_json::Value, Failure> {
    match &cli.command {
        Command::Estimate(a) => commands::estimate(a),
        Command::Select(a) => commands::select(a),
        Command::Simulate(a) => commands::simulate(a, seed_override(a.seed)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(v) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("JSON values serialise")
            );
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
