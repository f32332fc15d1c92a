use thiserror::Error;

use crate::open_ring::HalfOpenPiece;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The boxes have no common refinement. `cell` names the region of the
    /// carrier where the clash happens, when there is one.
    #[error("inconsistent join{}", .cell.as_ref().map(|c| format!(" on cell {c}")).unwrap_or_default())]
    InconsistentJoin { cell: Option<Box<HalfOpenPiece>> },

    #[error("meet of an empty family of boxes")]
    EmptyMeet,

    #[error("carrier mismatch: {left} vs {right}")]
    CarrierMismatch { left: String, right: String },

    #[error("malformed interval: {0}")]
    MalformedInterval(String),

    #[error("point {point} lies outside carrier {carrier}")]
    PointOutsideCarrier { point: String, carrier: String },

    #[error("enumeration cap exceeded: {what} needs {needed}, cap is {cap}")]
    EnumerationCapExceeded {
        what: &'static str,
        needed: usize,
        cap: usize,
    },

    #[error("infimum over the empty open set")]
    EmptyOpen,

    #[error("step function #{index} of the family is not way-below the target")]
    NotWayBelow { index: usize },

    #[error("parse error at {position}: {message}")]
    ParseError { position: usize, message: String },

    #[error("vector field evaluated on the bottom box")]
    BottomInput,

    #[error("no a-priori bound found{}", .step.map(|j| format!(" on step {j}")).unwrap_or_default())]
    DivergenceBound { step: Option<usize> },

    #[error("no fixpoint after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

impl Error {
    pub(crate) fn dims(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }
}
