//! `toeplitz-dyn`: hypercyclicity verdicts, spectral portraits, eigenvectors
//! and orbits of banded Toeplitz operators from the command line.
//!
//! Exit codes: `classify` returns 0 (Hypercyclic), 1 (NotHypercyclic),
//! 2 (Indeterminate) or 3 (Unsupported); every other successful command
//! returns 0. Usage errors return 64, numerical errors 65 with a JSON body
//! on stdout, and I/O errors 74. The log level is read from
//! `TOEPLITZ_DYN_LOG` (default `warn`).

mod args;
mod commands;
mod error;
mod input;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command, Common};
use crate::commands::Outcome;
use crate::error::{CliError, EXIT_USAGE};

fn common(command: &Command) -> &Common {
    match command {
        Command::Classify(a) => &a.common,
        Command::Spectrum(a) => &a.common,
        Command::Winding(a) => &a.common,
        Command::Eigen(a) => &a.common,
        Command::Orbit(a) => &a.common,
        Command::Witness(a) => &a.common,
        Command::Norm(a) => &a.common,
        Command::Ellipse(a) => &a.common,
    }
}

fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    commands::validate(common(command))?;
    match command {
        Command::Classify(a) => commands::cmd_classify(a),
        Command::Spectrum(a) => commands::cmd_spectrum(a),
        Command::Winding(a) => commands::cmd_winding(a),
        Command::Eigen(a) => commands::cmd_eigen(a),
        Command::Orbit(a) => commands::cmd_orbit(a),
        Command::Witness(a) => commands::cmd_witness(a),
        Command::Norm(a) => commands::cmd_norm(a),
        Command::Ellipse(a) => commands::cmd_ellipse(a),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), CliError> {
    match &common(&cli.command).out {
        Some(path) => fs::write(path, &outcome.body)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(outcome.body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> i32 {
    let result = dispatch(&cli.command).and_then(|outcome| {
        emit(cli, &outcome)?;
        Ok(outcome.exit)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            if let Some(body) = e.json_body() {
                println!("{body}");
            }
            eprintln!("toeplitz-dyn: {e}");
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TOEPLITZ_DYN_LOG", "warn"))
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    ExitCode::from(run(&cli) as u8)
}
