//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numerical parameter violates its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A sweep or run configuration is inconsistent or incomplete.
    #[error("configuration error: {0}")]
    Config(String),

    /// Two fields that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The sampling grid cannot hold the field to the required accuracy.
    #[error("grid too small: {0}")]
    GridTooSmall(String),

    /// Both interferometer arms carry zero power.
    #[error("visibility undefined: both fields have zero power")]
    UndefinedVisibility,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("image encoding failed: {0}")]
    Image(#[from] image::ImageError),
}
