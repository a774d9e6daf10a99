use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a matroid: {0}")]
    NotAMatroid(String),

    #[error("degenerate basepoint: {0}")]
    BasepointDegenerate(String),

    /// A finite theorem failed on a concrete instance. Must never fire;
    /// suites surface it as a counterexample instead of panicking.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("strategy invalid: {0}")]
    StrategyInvalid(String),

    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
