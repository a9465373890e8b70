mod args;
mod commands;
mod error;
mod input;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use commands::Outcome;
use error::CliError;

const EXIT_VERIFICATION_FAILED: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Entropy(a) => commands::entropy(a),
        Command::Verify(a) => commands::verify(a),
        Command::Audenaert(a) => commands::audenaert(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Witness(a) => commands::witness(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": "usage", "message": e.to_string().trim_end() }));
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(EXIT_VERIFICATION_FAILED),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(EXIT_INVALID_INPUT)
        }
    }
}
