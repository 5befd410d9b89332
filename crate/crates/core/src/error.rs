use thiserror::Error;

/// Errors produced anywhere in the pump pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),

    #[error("LP relaxation is infeasible")]
    InstanceLpInfeasible,

    #[error("numerical breakdown in LP solver: {0}")]
    SolverNumeric(String),

    #[error("vertex oracle limited to n <= {max_vars} and m <= {max_rows}")]
    OracleTooLarge { max_vars: usize, max_rows: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}
