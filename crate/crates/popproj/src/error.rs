//! Crate-wide error type.
//!
//! Every error that can reach the CLI maps to exit code 1 (input or
//! configuration problem); "completed with warnings" is not an error and is
//! signalled separately by the command layer.

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Parse failure in an input file, located as precisely as possible.
/// `row` is the 1-based physical line (the header is row 1).
#[derive(Debug)]
pub struct ParseError {
    pub file: PathBuf,
    pub row: Option<u64>,
    pub column: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file.display())?;
        if let Some(row) = self.row {
            write!(f, ", row {row}")?;
        }
        if let Some(col) = &self.column {
            write!(f, ", column `{col}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error("{what} = {requested} is outside the achievable range [{lo:.3}, {hi:.3}]")]
    OutOfRange {
        what: String,
        requested: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{context}: needs at least {needed} observations, got {got}")]
    TooFewObservations {
        context: String,
        needed: usize,
        got: usize,
    },

    #[error(
        "{context}: optimizer did not converge after {iterations} iterations \
         (gradient norm {gradient_norm:.3e})"
    )]
    NonConvergence {
        context: String,
        iterations: usize,
        gradient_norm: f64,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("chain metadata mismatch: {0}")]
    ChainMismatch(String),

    #[error("storage: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Shorthand used by the input parsers.
    pub fn parse(
        file: impl Into<PathBuf>,
        row: Option<u64>,
        column: Option<&str>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse(ParseError {
            file: file.into(),
            row,
            column: column.map(str::to_owned),
            message: message.into(),
        })
    }

    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_error_names_file_row_and_column() {
        let e = Error::parse("data/tfr.csv", Some(7), Some("tfr"), "not a number");
        let msg = e.to_string();
        assert!(msg.contains("data/tfr.csv"), "{msg}");
        assert!(msg.contains("row 7"), "{msg}");
        assert!(msg.contains("`tfr`"), "{msg}");
        assert!(msg.contains("not a number"), "{msg}");
    }

    #[test]
    fn config_error_names_field_path() {
        let e = Error::config("mcmc.n_iter", "must exceed burn_in");
        assert!(e.to_string().contains("mcmc.n_iter"));
    }
}
