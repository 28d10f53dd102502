//! Error type shared across the library and the CLI.

use thiserror::Error;

/// Errors produced by the planning library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed its domain check; the message names the parameter.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Catalog text failed to parse. Line and column are 1-based; the column
    /// counts fields, not characters.
    #[error("catalog parse error at line {line}, column {column}: {message}")]
    CatalogParse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A technology name was not found in the active catalog.
    #[error("unknown technology {name:?}; available: {}", available.join(", "))]
    UnknownTech {
        name: String,
        available: Vec<String>,
    },

    /// The decision percentile was not among the simulated percentiles.
    #[error("percentile {0} is not part of the simulation summary")]
    MissingPercentile(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
