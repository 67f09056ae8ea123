//! Command-line front end for `lindley-core`: fitting, sampling, Monte Carlo
//! studies, exact risk and curve tabulation, with CSV and JSON output.

pub mod args;
pub mod commands;
pub mod config;
pub mod data;
pub mod error;
pub mod output;
pub mod runner;

use args::{Cli, Command};
pub use error::{CliError, Result};

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Fit(a) => commands::fit(a),
        Command::Sample(a) => commands::sample_cmd(a),
        Command::Simulate(a) => {
            let var = std::env::var(runner::THREADS_VAR).ok();
            let threads = runner::thread_count(var.as_deref())?;
            commands::simulate(a, threads)
        }
        Command::Risk(a) => commands::risk_cmd(a),
        Command::Curve(a) => commands::curve(a),
    }
}
