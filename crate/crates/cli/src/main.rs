//! `radial-gate`: command-line front end to `radial-gate-core`.

mod args;
mod commands;
mod error;
mod output;
mod potential;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use error::CliError;

const THREADS_VAR: &str = "RADIAL_GATE_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Args(format!(
            "{THREADS_VAR} must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Args(format!("cannot start {n} worker threads: {e}")))
}

/// First line of a clap error without its `error: ` prefix.
fn clap_message(e: &clap::Error) -> String {
    let text = e.render().to_string();
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .unwrap_or("invalid arguments");
    line.trim_start_matches("error: ").trim().to_owned()
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match &cli.command {
        Command::Classify(a) => commands::classify_cmd(a),
        Command::VerifyAnomaly(a) => commands::verify_anomaly(a),
        Command::Well(a) => commands::well(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::PseudoY0(a) => commands::pseudo_y0(a),
        Command::Fig1(a) => commands::fig1(a),
        Command::Flux(a) => commands::flux(a),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.report());
    ExitCode::from(e.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{}", e.render());
            return ExitCode::SUCCESS;
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            return fail(&CliError::Args(
                "a subcommand is required (see --help)".into(),
            ))
        }
        Err(e) => return fail(&CliError::Args(clap_message(&e))),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
