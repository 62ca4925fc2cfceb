use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("numerical failure: {0}")]
    Numerical(larmor::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(larmor::Error),
}

impl PipelineError {
    pub fn parse(line: u64, message: impl Into<String>) -> Self {
        PipelineError::Parse {
            line,
            message: message.into(),
        }
    }

    /// Process exit status: 2 configuration, 3 parse, 4 numerical
    /// non-convergence, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Parse { .. } => 3,
            PipelineError::Numerical(_) => 4,
            PipelineError::Io { .. } => 1,
            PipelineError::Core(_) => 2,
        }
    }
}

impl From<larmor::Error> for PipelineError {
    fn from(e: larmor::Error) -> Self {
        use larmor::Error as E;
        match e {
            E::Convergence { .. } | E::NumericalInstability { .. } | E::DegenerateTransmission => {
                PipelineError::Numerical(e)
            }
            E::InvalidConfig(msg) => PipelineError::Config(msg),
            other => PipelineError::Core(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, PipelineError>;
