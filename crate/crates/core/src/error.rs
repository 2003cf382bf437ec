use thiserror::Error;

/// Errors raised by the numeric, solver and audit layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("unsupported power: {0}")]
    UnsupportedPower(String),

    #[error("degenerate progression: common difference must be nonzero")]
    DegenerateStep,

    #[error("singular system: zero pivot in row {row}")]
    SingularSystem { row: usize },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// Two algebraically equal evaluations disagreed. Always an implementation bug.
    #[error("internal forms disagree: {0}")]
    FormMismatch(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    /// Stable short code, used in audit records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidScalar(_) => "InvalidScalar",
            Error::InvalidIndex(_) => "InvalidIndex",
            Error::UnsupportedPower(_) => "UnsupportedPower",
            Error::DegenerateStep => "DegenerateStep",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::SizeLimit(_) => "SizeLimit",
            Error::FormMismatch(_) => "FormMismatch",
            Error::Parse { .. } => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
