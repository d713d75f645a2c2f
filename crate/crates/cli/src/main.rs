// SPDX-License-Identifier: Apache-2.0

//! `chainscope` command-line front end.

mod args;
mod commands;
mod table;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{run, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match cli.workers() {
        Some(w) => rayon::ThreadPoolBuilder::new().num_threads(w).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Input(_) => 2,
                CliError::Inconclusive(_) => 3,
            })
        }
    }
}
