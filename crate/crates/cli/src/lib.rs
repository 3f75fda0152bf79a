//! Front end for `digold-core`: argument parsing, the sieve cache and report
//! rendering. The `digold` binary is a thin wrapper around [`main_with_args`].

pub mod cache;
pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};

use clap::Parser;

pub use config::{Cli, Command, RunConfig};
pub use report::{Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] digold_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Cache(#[from] cache::CacheError),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_cap() => EXIT_CAP,
            CliError::Core(e) if e.is_invariant() => EXIT_INVARIANT,
            CliError::Core(_) | CliError::Usage(_) => EXIT_VALIDATION,
            CliError::Cache(_) | CliError::Io(_) | CliError::Threads(_) => 1,
        }
    }
}

/// Runs a validated configuration and writes its report. Returns the exit
/// code: a failed bound or self-check still writes the report, then yields
/// [`EXIT_INVARIANT`].
pub fn execute(config: &RunConfig) -> Result<i32, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()?;
    let outcome = pool.install(|| commands::run(config))?;
    let text = outcome.report.render(config.format);
    match &config.output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(match outcome.breach {
        Some(msg) => {
            eprintln!("digold: invariant violated: {msg}");
            EXIT_INVARIANT
        }
        None => EXIT_OK,
    })
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
        }
    };
    match RunConfig::from_cli(cli).and_then(|c| execute(&c)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("digold: {e}");
            e.exit_code()
        }
    }
}
