use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the Gamma function at x = {0}")]
    Pole(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid hypergeometric parameters: c = {0} is zero or a negative integer")]
    InvalidHypParams(f64),
    #[error("hypergeometric series did not converge within {terms} terms at x = {x}")]
    NoConvergence { x: f64, terms: usize },
    #[error("coefficient {k} is not representable: F(.;1) vanishes but the boundary coefficient does not")]
    DegenerateCoefficient { k: i64 },
    #[error("finite-difference stencil leaves the disc: |z| + 2h = {0} >= 1")]
    StepTooLarge(f64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
