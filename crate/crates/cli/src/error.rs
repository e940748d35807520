//! Errors and the exit-code contract.

use thiserror::Error;
use urn_core::UrnError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const UNTENABLE: i32 = 2;
    pub const MISMATCH: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {source}")]
    Scheme {
        context: String,
        #[source]
        source: UrnError,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Untenable(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Stdout(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Untenable(_) => exit::UNTENABLE,
            CliError::Mismatch(_) => exit::MISMATCH,
            CliError::Scheme {
                source: UrnError::NegativeCount { .. } | UrnError::DeadlockEncountered { .. },
                ..
            } => exit::UNTENABLE,
            _ => exit::INPUT,
        }
    }

    pub fn scheme(context: impl Into<String>) -> impl FnOnce(UrnError) -> CliError {
        let context = context.into();
        move |source| CliError::Scheme { context, source }
    }

    pub fn io(path: impl std::fmt::Display) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.to_string();
        move |source| CliError::Io { path, source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
