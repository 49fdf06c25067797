use thiserror::Error;

use crate::audio_io::WavError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the range an operation accepts.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A value outside the mathematical domain of a risk estimate or distortion.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    /// Non-finite or otherwise malformed signal data.
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Wav(#[from] WavError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
