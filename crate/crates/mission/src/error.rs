use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MissionError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("element set line {line}: {message}")]
    Tle { line: usize, message: String },
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("tour optimization found no feasible design: {0}")]
    Infeasible(adr_core::Error),
    #[error("propagation of {leg} aborted: {source}")]
    Propagation {
        leg: String,
        #[source]
        source: adr_core::Error,
    },
    #[error(transparent)]
    Core(#[from] adr_core::Error),
}

impl MissionError {
    /// Process exit code: 1 general, 2 parse, 3 infeasible, 4 propagation.
    pub fn exit_code(&self) -> i32 {
        match self {
            MissionError::Tle { .. } | MissionError::Config(_) | MissionError::Format { .. } => 2,
            MissionError::Infeasible(_) => 3,
            MissionError::Propagation { .. } => 4,
            MissionError::Io { .. } | MissionError::Core(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> MissionError {
        let path = path.into();
        move |source| MissionError::Io { path, source }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl ToString) -> MissionError {
        MissionError::Format {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

pub type Result<T, E = MissionError> = std::result::Result<T, E>;
