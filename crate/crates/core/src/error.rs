use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter or component value violates its constraints.
    #[error("configuration error: {0}")]
    Config(String),

    /// A time or index lies outside the sampled range.
    #[error("range error: {0}")]
    Range(String),

    /// The block graph cannot be evaluated (missing drivers, undeclared cycles, ...).
    #[error("structural error: {0}")]
    Structural(String),

    /// An experiment protocol cannot be realized on the requested grid.
    #[error("protocol error: {0}")]
    Protocol(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(config_err(format!(
            "{name} must be finite and > 0, got {value}"
        )))
    }
}
