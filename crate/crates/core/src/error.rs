use thiserror::Error;

/// Errors raised by the library. Every fallible operation returns [`Result`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is reducible or zero; Perron bracketing needs an irreducible nonzero matrix")]
    Reducible,

    #[error("symbol {symbol} out of range for alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("not a zeta function: {0}")]
    NotAZetaFunction(String),

    #[error("inconsistent signed family: {0}")]
    InconsistentFamily(String),

    #[error("zero polynomial has no roots to bracket")]
    ZeroPolynomial,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not expanding in one step: {0}")]
    NotExpanding(String),

    #[error("branch index {index} exceeds branch count {count}")]
    BranchIndex { index: usize, count: usize },

    #[error("point outside branch domain: distance {distance} >= radius {radius}")]
    OutsideBranchDomain { distance: f64, radius: f64 },

    #[error("shadowing failed: {0}")]
    Shadow(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("inadmissible word: {0}")]
    Inadmissible(String),

    #[error("grid too coarse or too large: {0}")]
    Grid(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
