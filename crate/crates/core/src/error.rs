use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} attributes, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("value {value} for attribute `{attribute}` is outside [{min}, {max}]")]
    OutOfRange {
        attribute: String,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid offer: {0}")]
    InvalidOffer(String),

    #[error("invalid utility profile: {0}")]
    InvalidProfile(String),

    #[error("invalid concession parameters: {0}")]
    InvalidParams(String),

    #[error("invalid negotiation config: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(
        "could not sample {requested} {class} teams of size {team_size}: \
         only {found} qualified after {attempts} draws"
    )]
    TeamGeneration {
        class: String,
        team_size: usize,
        requested: usize,
        found: usize,
        attempts: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
