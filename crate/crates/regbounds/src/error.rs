use thiserror::Error;

/// Errors produced by the library and surfaced by the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("{0} are not multiplicatively independent")]
    Dependent(String),

    #[error("unknown unit `{0}`")]
    UnknownUnit(String),

    #[error("product formula violated for unit `{unit}` (residual {residual})")]
    ProductFormula { unit: String, residual: String },

    #[error("invalid input in {context}: {message}")]
    Schema { context: String, message: String },

    #[error("invalid number `{0}`")]
    Number(String),

    #[error("enumeration radius cap exceeded (radius {radius}); input is likely ill-conditioned")]
    EnumerationCap { radius: String },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
