//! `hcm` — evaluate, sweep, and search servo-driven hair-clip-mechanism
//! robot designs from the command line.
//!
//! Outputs are pure functions of the arguments and input files: no
//! timestamps, no machine identifiers, no nondeterministic ordering.
//! Exit codes: 0 success, 2 validation/usage error, 3 numeric failure.

mod args;
mod run;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match run::run(cli) {
        Ok(()) => ExitCode::from(0),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
