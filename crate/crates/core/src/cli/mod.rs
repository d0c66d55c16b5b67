//! The `lgsim` command-line front end.
//!
//! Exit statuses: 0 success, 1 configuration error, 2 I/O error,
//! 3 check failure.

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::Parser;

pub use commands::{run_command, CommandOutcome, ORACLE_TOL};
pub use config::{Cli, Command, CommandKind, ConfigError, Method, RunConfig, TimeAxis};
pub use output::{read_records, write_records, ExtremaRecord, Format, OracleRecord, OutputRecord, Record, SurfaceRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LGSIM_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Io { path: Option<PathBuf>, source: std::io::Error },
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_IO,
            CliError::CheckFailed(_) => EXIT_CHECK,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Io { path: Some(p), source } => {
                write!(f, "I/O error on {}: {source}", p.display())
            }
            CliError::Io { path: None, source } => write!(f, "I/O error: {source}"),
            CliError::CheckFailed(msg) => write!(f, "check failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

/// Parses arguments, runs the subcommand and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = RunConfig::from_cli(&cli, |k| std::env::var(k).ok())
        .map_err(CliError::from)
        .and_then(|cfg| run_command(&cfg));
    match result {
        Ok(outcome) => {
            for line in outcome.notes {
                eprintln!("{line}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("lgsim: {e}");
            e.exit_code()
        }
    }
}
