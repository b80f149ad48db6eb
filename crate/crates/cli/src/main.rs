use std::process::ExitCode;

use clap::Parser;
use spinpurify_cli::{parse_spin_cap, run, Cli, MAX_SPINS_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result =
        parse_spin_cap(std::env::var(MAX_SPINS_ENV).ok().as_deref()).and_then(|cap| run(cli, cap));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinpurify: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
