//! Error types for the crate.

use thiserror::Error;

/// Errors produced by configuration validation, checkpoint I/O, and the
/// training harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of range or inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A shape or dimension disagreement detected at an API boundary.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Checkpoint or metrics file I/O failed.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Checkpoint (de)serialization failed.
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    /// Metrics CSV writing failed.
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
