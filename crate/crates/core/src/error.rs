use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid factor: {0}")]
    InvalidFactor(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("index {index} out of range for word of length {len}")]
    Range { index: usize, len: usize },

    #[error("no suitable element found within search bound {bound}")]
    NotFoundWithinBound { bound: usize },

    #[error("conflicting assignment: {0}")]
    ConflictingAssignment(String),

    #[error("frozen set is empty")]
    EmptyInput,

    #[error("admissibility violation: {0}")]
    AdmissibilityViolation(String),

    #[error("trajectory tail is not geodesic: {0}")]
    GeodesicViolation(String),

    #[error("shadows live over different copy roots")]
    ChartMismatch,

    #[error("neither candidate decreases the shadow-intersection count")]
    ProgressFailure,

    #[error("could not place splice points: {0}")]
    PlacementFailure(String),

    #[error("{0}")]
    TheoremGateViolation(String),

    #[error("{0}")]
    UnsupportedPairing(String),

    #[error("step budget exceeded: {0}")]
    StepBudgetExceeded(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
