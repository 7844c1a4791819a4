use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("negative radius")]
    NegativeRadius,
    #[error("degenerate affine image: slope is zero")]
    ZeroSlope,
    #[error("point is an enclosure where an exact value is required")]
    InexactPoint,
    #[error("point {0} lies outside the space")]
    OutOfSpace(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("symbol word exhausted after {0} symbols")]
    WordExhausted(usize),
    #[error("not a pseudo-orbit: {0}")]
    NotPseudoOrbit(String),
    #[error("map is not invertible: {0}")]
    NotInvertible(String),
    #[error("map has uncertain parameters: {0}")]
    NotExact(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cyclic order violation: {0}")]
    CyclicOrder(String),
    #[error("modulus violation: displacement {displacement} exceeds {bound}")]
    Modulus { displacement: String, bound: String },
    #[error("conjugacy validation failed: {0}")]
    Conjugacy(String),
    #[error("enclosure too wide to decide: {0}")]
    Imprecise(String),
}

pub type Result<T> = std::result::Result<T, Error>;
