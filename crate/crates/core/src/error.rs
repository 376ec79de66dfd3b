use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: denominator vanishes at term k = {k}")]
    Pole { k: usize },
    #[error("case error: {0}")]
    Case(String),
    #[error("detailed balance fails at ({x}, {y})")]
    Balance { x: usize, y: usize },
    #[error("incomplete eigenbasis: {0}")]
    Completeness(String),
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("tuning error at stage {stage}: {reason}")]
    Tuning { stage: usize, reason: String },
    #[error("sign pattern error: {0}")]
    Pattern(String),
    #[error("rates do not satisfy the difference equation at n = {n}, x = {x}")]
    Rates { n: usize, x: usize },
    #[error("operation needs a floating point backend: {0}")]
    Transcendental(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole { .. } => "pole",
            Error::Case(_) => "case",
            Error::Balance { .. } => "balance",
            Error::Completeness(_) => "completeness",
            Error::Truncation(_) => "truncation",
            Error::Tuning { .. } => "tuning",
            Error::Pattern(_) => "pattern",
            Error::Rates { .. } => "rates",
            Error::Transcendental(_) => "transcendental",
            Error::Numeric(_) => "numeric",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
