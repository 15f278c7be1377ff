use thiserror::Error;

/// Errors produced by the estimators, the data loaders and the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("no variants")]
    Empty,

    #[error("duplicate variant id `{0}`")]
    DuplicateId(String),

    #[error("variant `{id}`: {message}")]
    InvalidVariant { id: String, message: String },

    #[error("variant `{0}` has a zero association with the exposure")]
    DegenerateInstrument(String),

    #[error("all associations with the exposure are zero")]
    AllDegenerate,

    #[error("{method} needs at least {needed} variants with positive weight, got {got}")]
    InsufficientVariants {
        method: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("singular design: {0}")]
    SingularDesign(String),

    #[error("summary set must be harmonized (all exposure associations non-negative)")]
    NotHarmonized,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite intermediate value in {0}")]
    NonFinite(&'static str),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("robust regression: {0}")]
    Subsampling(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
