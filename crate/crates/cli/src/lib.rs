//! File formats, parallel drivers and subcommands behind the `urn` binary.
//!
//! Exit codes: 0 success, 1 input error, 2 untenable scheme or deadlock,
//! 3 verification mismatch.

pub mod commands;
pub mod error;
pub mod output;
pub mod parallel;
pub mod preset;
pub mod scheme_file;

pub use error::{exit, CliError, Result};
