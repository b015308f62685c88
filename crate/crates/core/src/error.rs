use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("joint angle {alpha} outside the shape domain |alpha| <= {limit}")]
    ShapeOutOfDomain { alpha: f64, limit: f64 },

    #[error("singular configuration at alpha = {alpha} (condition number {condition:e})")]
    SingularConfiguration { alpha: f64, condition: f64 },

    #[error("invalid drag parameters: {0}")]
    InvalidParams(String),

    #[error("malformed gait: {0}")]
    InvalidGait(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
