//! CLI error taxonomy and the process exit-code contract.
//!
//! Exit codes: 0 success, 2 configuration error (bad scenario, bad flags),
//! 3 numerical failure during integration or analysis, 4 I/O failure.

use std::fmt;
use thiserror::Error;

/// Everything the binary can fail with, bucketed by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Scenario or flag problem → exit 2.
    #[error("configuration error: {0}")]
    Config(String),
    /// Numerical failure (non-finite state, step collapse, regime blow-up)
    /// → exit 3.
    #[error("numerical error: {0}")]
    Numeric(String),
    /// Filesystem or serialization failure → exit 4.
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<spindyn::Error> for CliError {
    fn from(err: spindyn::Error) -> Self {
        use spindyn::Error as E;
        match err {
            // Anything a correct scenario file could have prevented.
            E::InvalidParams(_)
            | E::InvalidStepConfig(_)
            | E::UnknownFormulation(_)
            | E::InvalidInitialState(_)
            | E::RegimeMismatch { .. } => CliError::Config(err.to_string()),
            // Failures of the numerics themselves.
            E::SuperluminalBoost(_)
            | E::OffShellVelocity { .. }
            | E::NonpositiveSpinMass { .. }
            | E::ZeroHbar { .. }
            | E::NonTimelikeMomentum(_)
            | E::NonFiniteState { .. }
            | E::StepCollapse { .. } => CliError::Numeric(err.to_string()),
        }
    }
}

/// Attach a path to an `io::Error` so the user knows which file failed.
pub fn io_err(context: &str, path: &std::path::Path, err: impl fmt::Display) -> CliError {
    CliError::Io(format!("{context} {}: {err}", path.display()))
}

pub type CliResult<T> = Result<T, CliError>;
