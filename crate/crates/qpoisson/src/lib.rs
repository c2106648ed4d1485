//! Command-line front end for `qpoisson-core`: config resolution, run
//! dispatch and the JSON/CSV report formats.

use std::fmt;

pub mod config;
pub mod output;

pub use config::{Cli, Format, Mode, RunConfig};
pub use output::{execute, RunResult};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NO_SUCCESS: u8 = 3;
pub const EXIT_CAPACITY: u8 = 4;

#[derive(Debug)]
pub enum AppError {
    Config(String),
    Core(qpoisson_core::Error),
    Io(String),
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        use qpoisson_core::Error as E;
        match self {
            AppError::Config(_) => EXIT_CONFIG,
            AppError::Io(_) => EXIT_INTERNAL,
            AppError::Core(e) => match e {
                E::Capacity { .. } => EXIT_CAPACITY,
                E::NoSuccess { .. } => EXIT_NO_SUCCESS,
                E::InvalidGrid(_)
                | E::InvalidDimension(_)
                | E::RhsLength { .. }
                | E::ZeroRhs
                | E::InvalidAlpha(_)
                | E::SizeGuard { .. }
                | E::InvalidRegisterSize(_)
                | E::ZeroShots
                | E::Config(_) => EXIT_CONFIG,
                _ => EXIT_INTERNAL,
            },
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(m) | AppError::Io(m) => f.write_str(m),
            AppError::Core(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for AppError {}

impl From<qpoisson_core::Error> for AppError {
    fn from(e: qpoisson_core::Error) -> Self {
        AppError::Core(e)
    }
}

/// Resolves the config, runs it and writes the report(s).
pub fn run_cli(cli: Cli) -> Result<(), AppError> {
    let config = RunConfig::from_cli(cli)?;
    if let Some(w) = config.n_warning() {
        eprintln!("{w}");
    }
    let result = execute(&config)?;
    output::write_outputs(&config, &result)
}
