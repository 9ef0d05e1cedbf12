//! Command-line front end for the soliton toolkit: TOML config ingestion,
//! dispatch to the computational modules, and deterministic JSON/CSV reports.

pub mod config;
pub mod report;
pub mod run;
pub mod verify;

use std::fmt;

/// Errors carrying their process exit code: 1 usage, 2 domain, 3 numerical.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(warpsol::Error),
    Numerical(String),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Domain(err) => write!(f, "{err}"),
            CliError::Numerical(msg) => write!(f, "{msg}"),
            CliError::Io(err) => write!(f, "{err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

/// Classifies a core error raised while executing a command.
pub fn runtime_error(err: warpsol::Error) -> CliError {
    match err {
        warpsol::Error::Numerical(msg) => CliError::Numerical(msg),
        other => CliError::Domain(other),
    }
}
