//! Command-line drivers, file formats and JSON reports on top of
//! [`spinpurify`].

pub mod args;
pub mod cli;
pub mod commands;
pub mod error;
pub mod format;

use std::path::Path;

pub use spinpurify as core;

pub use cli::{Cli, Command};
pub use commands::execute;
pub use error::{CliError, CliResult};

/// Environment variable holding the largest spin count a run may allocate.
pub const MAX_SPINS_ENV: &str = "SPINPURIFY_MAX_SPINS";

/// Reads a spin cap from the value of [`MAX_SPINS_ENV`].
pub fn parse_spin_cap(value: Option<&str>) -> CliResult<usize> {
    match value {
        None => Ok(spinpurify::numerics::DEFAULT_MAX_SPINS),
        Some(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| {
                CliError::Usage(format!("{MAX_SPINS_ENV}={v:?} is not a positive integer"))
            }),
    }
}

/// Resolves `--config`, checks the spin cap, runs the command and writes
/// its output.
pub fn run(cli: Cli, max_spins: usize) -> CliResult<()> {
    let cli = match &cli.config {
        Some(path) => {
            if cli.command.is_some() {
                return Err(CliError::Usage(
                    "--config cannot be combined with a subcommand".into(),
                ));
            }
            let mut loaded = cli::load_config(path)?;
            loaded.output = cli.output.or(loaded.output);
            loaded
        }
        None => cli,
    };
    let command = cli
        .command
        .ok_or_else(|| CliError::Usage("no subcommand given (see --help)".into()))?;
    let spins = command.spins_needed();
    if spins > max_spins {
        return Err(spinpurify::Error::Capacity { spins, max_spins }.into());
    }
    let text = execute(&command)?;
    write_output(cli.output.as_deref(), &text)
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}
