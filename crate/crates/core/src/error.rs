use thiserror::Error;

/// Errors raised across the crate. Each variant corresponds to one stable
/// error code, exposed through [`Error::code`] for machine-readable output.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("frame of size {size} exceeds the limit of {limit} outcomes")]
    FrameTooLarge { size: usize, limit: usize },

    #[error("invalid mass function: {0}")]
    MassInvalid(String),

    #[error("invalid capacity table: {0}")]
    CapacityInvalid(String),

    #[error("operands live on different frames")]
    FrameMismatch,

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("enumeration of {required} collections exceeds budget {budget}")]
    TooLarge { required: u128, budget: u128 },

    #[error("set operation needs more than {budget} points")]
    SetTooLarge { budget: usize },

    #[error("value {value} at index {index} is not a point of the corresponding set")]
    NotASelection { index: usize, value: f64 },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("work budget exceeded: {0}")]
    Budget(String),

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("weights sum to {sum}, expected 1")]
    Normalization { sum: f64 },

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidFrame(_) => "E_FRAME_INVALID",
            Error::FrameTooLarge { .. } => "E_FRAME_TOO_LARGE",
            Error::MassInvalid(_) => "E_MASS_INVALID",
            Error::CapacityInvalid(_) => "E_CAPACITY_INVALID",
            Error::FrameMismatch => "E_FRAME_MISMATCH",
            Error::InvalidSet(_) => "E_SET_INVALID",
            Error::TooLarge { .. } => "E_TOO_LARGE",
            Error::SetTooLarge { .. } => "E_SET_TOO_LARGE",
            Error::NotASelection { .. } => "E_NOT_A_SELECTION",
            Error::InconsistentInput(_) => "E_INCONSISTENT_INPUT",
            Error::Budget(_) => "E_BUDGET",
            Error::InvalidConfig(_) => "E_CONFIG",
            Error::Parse(_) => "E_PARSE",
            Error::Normalization { .. } => "E_NORMALIZATION",
            Error::UnknownLabel(_) => "E_UNKNOWN_LABEL",
            Error::Usage(_) => "E_USAGE",
            Error::Io(_) => "E_IO",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
