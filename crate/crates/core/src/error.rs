use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the range on which a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Scaled wavenumbers left the retained lattice.
    #[error("overflow: {0}")]
    Overflow(String),

    /// The integrator produced non-finite coefficients.
    #[error("numerical instability at step {step}: last good time t = {last_good_time}")]
    Stability { step: u64, last_good_time: f64 },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("fit failed: {0}")]
    Fit(String),

    /// Schema or validation failure in a configuration document.
    #[error("invalid configuration field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::Overflow(_) => "OverflowError",
            Error::Stability { .. } => "StabilityError",
            Error::Index(_) => "IndexError",
            Error::GridMismatch(_) => "GridMismatchError",
            Error::Fit(_) => "FitError",
            Error::Config { .. } => "ConfigError",
            Error::Format(_) => "FormatError",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
            Error::Csv(_) => "CsvError",
        }
    }
}
