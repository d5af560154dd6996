//! `gromov-lab` command-line front end. Exit codes: 0 when every requested
//! check passes, 2 when a check fails (reports are still written), 1 on usage
//! or data errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use gromov_lab::Status;

use crate::args::Cli;
use crate::commands::{run, Ctx, Outcome};
use crate::config::Config;
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Checked(status)) => match status {
            Status::Pass => ExitCode::SUCCESS,
            Status::Inconclusive => {
                eprintln!("note: some checks were inconclusive");
                ExitCode::SUCCESS
            }
            Status::Fail => {
                eprintln!("check failed");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = Config::resolve(&cli.params)?;
    let mut ctx = Ctx {
        cfg: &cfg,
        csv_dir: cli.params.csv_dir.as_deref(),
        inputs: Default::default(),
    };
    run(&cli.command, &mut ctx)
}
