//! Command-line front end: argument parsing, output formats and exit codes.
//!
//! Matrices are written as `{ "n", "entries", "manifest" }` JSON with complex
//! entries as `[re, im]` pairs. Tabular data is CSV with the run manifest
//! JSON on a leading `#` line, followed by the header row.

pub mod args;
pub mod commands;
pub mod io;
pub mod manifest;

use std::fmt;

/// Largest residual a pseudometric may carry and still be written without `--force`.
pub const EMIT_RESIDUAL: f64 = 1e-8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Invalid flag combination detected after parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A result the CLI refuses to write.
#[derive(Debug)]
pub struct NumericalError(pub String);

impl fmt::Display for NumericalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NumericalError {}

/// Maps a failure to the documented exit code.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<ptssh::Error>() {
        Some(
            ptssh::Error::InvalidDimension { .. }
            | ptssh::Error::InvalidParameter(_)
            | ptssh::Error::RobinPole
            | ptssh::Error::IndexOutOfRange { .. }
            | ptssh::Error::Cutoff { .. },
        ) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}
