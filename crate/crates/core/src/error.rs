use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("not a homeomorphism: {0}")]
    NotHomeomorphism(String),

    #[error("bad window: {0}")]
    BadWindow(String),

    /// A σ-translate of exceptional data would leave the space window.
    #[error("window overflow: shifting by {shift} moves exceptional data outside window {window}")]
    WindowOverflow { shift: i64, window: u64 },

    #[error("point {0} does not belong to this space")]
    ForeignPoint(String),

    #[error("function is not continuous: {0}")]
    Discontinuous(String),

    #[error("operands live on different spaces")]
    SpaceMismatch,

    #[error("element is not in the commutant of C(X) (coefficient {k})")]
    NotInCommutant { k: i64 },

    /// The interior of `Fix_k` is not closed; `point` lies in its closure but not in it.
    #[error("no projection onto the commutant: interior of Fix_{k} is not closed at {point}")]
    ProjectionUnavailable { k: i64, point: String },

    #[error("truncation radius {radius} too small for element of degree {degree}")]
    TruncationTooSmall { radius: usize, degree: u64 },

    #[error("eigenvalue iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
