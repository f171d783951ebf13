use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("no value given for parameter `{0}`")]
    MissingParameter(String),

    #[error("alphabet mismatch: expected {expected}, found {found}")]
    AlphabetMismatch { expected: String, found: String },

    #[error("exponent has a nonzero identity component")]
    IdentityInExponent,

    #[error("vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("`{0}` is not a Lyndon word")]
    NotLyndon(String),

    #[error("word `{0}` is too short for a standard factorization")]
    WordTooShort(String),

    #[error("expression is not a pure Lie element: {0}")]
    NotPure(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("condition for word `{0}` is already present")]
    DuplicateWord(String),

    #[error("order condition for `{word}` violated (residual {residual:e})")]
    OrderConditionViolated { word: String, residual: f64 },

    #[error("scheme has free parameters: {0}")]
    NonNumericScheme(String),

    #[error("no basis available for grade {0}")]
    UnsupportedBasisGrade(u32),

    #[error("order must be even, got {0}")]
    OddOrder(u32),

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),

    #[error("quadrature rule has {available} nodes but the scheme uses A{needed}")]
    InsufficientNodes { needed: usize, available: usize },

    #[error("no Gauss rule of order {0} (supported: 4, 6, 8)")]
    UnsupportedOrder(u32),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(e.to_string())
    }
}
