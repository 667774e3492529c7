use std::process::ExitCode;

use clap::Parser;
use orthant_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("orthant: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
