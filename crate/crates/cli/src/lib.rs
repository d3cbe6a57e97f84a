//! Command-line front end for `gchtw-core`.
//!
//! [`run`] is the whole binary: it parses arguments, runs one subcommand and
//! returns the process exit code.  Every file a subcommand writes gets a
//! `<file>.manifest.json` next to it recording the command line, parameters,
//! derived equilibria and an input hash.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::error::ErrorKind;
use clap::Parser;

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod output;

pub use args::Cli;
pub use error::{CliError, CliResult};

fn strings<I, T>(argv: I) -> Vec<String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    argv.into_iter().map(|a| a.into().to_string_lossy().into_owned()).collect()
}

/// Runs one invocation, writing normal output to `out`.
pub fn run_with(argv: &[String], out: &mut dyn Write) -> CliResult<()> {
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    commands::dispatch(cli, argv, out)
}

/// [`run_with`] discarding standard output; used for sweep cells.
pub fn run_quiet(argv: &[String]) -> CliResult<()> {
    run_with(argv, &mut io::sink())
}

pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv = strings(argv);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => error::EXIT_OK,
                _ => error::EXIT_USAGE,
            };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match commands::dispatch(cli, &argv, &mut lock) {
        Ok(()) => error::EXIT_OK,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("gchtw: error: {e}");
            e.exit_code()
        }
    }
}
