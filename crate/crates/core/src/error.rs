use thiserror::Error;

/// Errors raised by the simulator and the estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid data: {0}")]
    Data(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("degenerate geometry: {0}")]
    Geometry(String),
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("estimation failed: {0}")]
    Estimation(String),
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
