use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("capacity exceeded: {what} is {got}, limit {limit}")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Probability(p))
    }
}
