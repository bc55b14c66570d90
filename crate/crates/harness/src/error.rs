use fpsearch_core::Error as CoreError;
use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn config(msg: impl Into<String>) -> Self {
        HarnessError::Config(msg.into())
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Invariant(_) => 3,
            HarnessError::Io { .. } => 1,
        }
    }
}

impl From<CoreError> for HarnessError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::PulseNotUnitary { index, defect } => HarnessError::Invariant(format!(
                "unitarity breach at pulse index {index} (defect {defect:.3e})"
            )),
            CoreError::DepthExceeded { .. }
            | CoreError::InvalidOracle(_)
            | CoreError::InvalidSpinSystem(_)
            | CoreError::InvalidErrorModel(_)
            | CoreError::PhaseMismatch { .. } => HarnessError::Config(e.to_string()),
            other => HarnessError::Invariant(other.to_string()),
        }
    }
}
