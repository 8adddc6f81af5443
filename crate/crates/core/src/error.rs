use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate edge: zero-length vector at vertex {vertex}")]
    DegenerateEdge { vertex: usize },
    #[error("non-finite coordinate at point {index}")]
    NonFinite { index: usize },
    #[error("too few points: need at least {required}, got {actual}")]
    TooFewPoints { required: usize, actual: usize },
    #[error("polygon is not simple: segment {first} intersects segment {second}")]
    SelfIntersection { first: usize, second: usize },
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unsupported description schema version {0}")]
    UnsupportedSchema(u32),
}

impl Error {
    /// Stable short code, one per failure class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegenerateEdge { .. } => "degenerate-edge",
            Error::NonFinite { .. } => "non-finite",
            Error::TooFewPoints { .. } => "too-few-points",
            Error::SelfIntersection { .. } => "self-intersection",
            Error::Domain(_) => "domain",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::Malformed(_) => "malformed",
            Error::UnsupportedSchema(_) => "unsupported-schema",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Malformed(err.to_string())
    }
}
