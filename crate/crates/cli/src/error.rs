use thiserror::Error;

/// Failures of a CLI run. Validation failures are not errors; they are
/// reported through [`crate::Outcome::passed`].
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] harmeas_core::Error),
    #[error(transparent)]
    MonteCarlo(#[from] harmeas_mc::McError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for usage, input and runtime errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit status when a validation suite exceeds its tolerance.
pub const EXIT_VALIDATION: i32 = 2;
