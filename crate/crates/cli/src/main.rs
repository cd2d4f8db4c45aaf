mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{CliError, Settings};

const EXIT_VALIDATION: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    let settings = Settings { workers: cli.workers, eps: cli.eps };
    if !(cli.eps > 0.0 && cli.eps.is_finite()) {
        return Err(CliError::Validation(format!("--eps must be positive, got {}", cli.eps)));
    }
    match &cli.command {
        Command::Exact(a) => commands::exact(a),
        Command::Faceprob(a) => commands::faceprob(a),
        Command::Absorb(a) => commands::absorb(a),
        Command::Simulate(a) => commands::simulate(a, &settings),
        Command::Chambers(a) => commands::chambers(a, &settings),
        Command::IdentityCheck(a) => commands::identity_check(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                CliError::Validation(_) => EXIT_VALIDATION,
                CliError::Verification(_) | CliError::Io(_) => EXIT_VERIFICATION,
            });
        }
    };
    if let Err(e) = output::emit(&outcome.report, cli.format, cli.out.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::FAILURE;
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFICATION)
    }
}
