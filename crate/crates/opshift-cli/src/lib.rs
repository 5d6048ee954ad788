//! Command-line front end: configuration ingestion, command dispatch,
//! and report emission for the shift toolkit.

pub mod commands;
pub mod config;

pub use commands::run_command;
pub use config::{parse_config, ConfigDoc, Params, ProblemConfig};

/// CLI-level error carrying the exit code it maps to (1 for usage and
/// parse problems, 2 when a mathematical verdict fails).
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn parse(message: String) -> Self {
        CliError { message, exit: 1 }
    }

    pub fn invariant(message: String) -> Self {
        CliError { message, exit: 1 }
    }

    pub fn usage(message: String) -> Self {
        CliError { message, exit: 1 }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}
