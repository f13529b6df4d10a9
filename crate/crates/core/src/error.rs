use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("gamma = 0 has no unique realization")]
    ZeroGamma,
    #[error("parabolic or identity element has no {0}")]
    Parabolic(&'static str),
    #[error("syntax error at position {pos}: {msg}")]
    WordSyntax { pos: usize, msg: String },
    #[error("word reduces to the identity")]
    EmptyWord,
    #[error("word is not good: {0}")]
    NotGood(String),
    #[error("degree hint too small: {0}")]
    DegreeHint(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("no positive radius certifiable")]
    NoRadius,
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("reducible polynomial: factors {0:?}")]
    Reducible(Vec<Vec<i64>>),
    #[error("numerical method did not converge: {0}")]
    NoConvergence(String),
    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("not tabulated: {0}")]
    NotTabulated(String),
    #[error("table data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
