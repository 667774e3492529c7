//! Front end for the `orthant` binary: argument parsing, validation, dispatch
//! to the estimators, and CSV output.

pub mod args;
pub mod config;
pub mod report;
pub mod run;
pub mod tables;

use std::fs::File;
use std::io::{self, BufWriter};

pub use args::Cli;
pub use config::RunConfig;
pub use report::{emit_csv, parse_csv, write_csv, ResultRow};
pub use run::{run, Output};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] orthant::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Format(String),
}

impl CliError {
    /// 2 for invalid configurations, 1 for everything that failed while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Validates, runs inside a pool of the requested size, and writes the output.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let config = RunConfig::from_cli(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", config.workers)))?;
    match pool.install(|| run(&config))? {
        Output::Rows(rows) => emit_csv(&rows, config.output.as_deref()),
        Output::Paths(batch) => {
            match &config.output {
                Some(p) => batch.write_csv(BufWriter::new(File::create(p)?))?,
                None => batch.write_csv(io::stdout().lock())?,
            }
            Ok(())
        }
    }
}
