//! `polarchan` command-line driver.
//!
//! Exit codes: 0 when every solver run converged, 2 when one stopped at the
//! iteration cap, 1 on any error.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

/// Outcome of a successful command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completion {
    Converged,
    HitIterationCap,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Reconstruct(a) => commands::reconstruct(a),
        Command::ReproEx1(a) => commands::repro_ex1(a),
        Command::ReproEx2(a) => commands::repro_ex2(a),
    };
    match result {
        Ok(Completion::Converged) => ExitCode::SUCCESS,
        Ok(Completion::HitIterationCap) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
