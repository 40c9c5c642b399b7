use thiserror::Error;

use crate::complex::{CellId, DSquaredViolation};
use crate::morse::MatchingError;
use crate::verify::IdentityReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0} is not invertible")]
    NotInvertible(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("duplicate cell id {0}")]
    DuplicateCell(CellId),

    #[error("unknown cell {0}")]
    UnknownCell(CellId),

    #[error("cell {0} has rank 0")]
    ZeroRank(CellId),

    #[error("cell id must be nonempty")]
    EmptyCellId,

    #[error("component {src} -> {tgt}: target degree {tgt_degree} is not source degree {src_degree} {shift:+}")]
    DegreeMismatch { src: CellId, tgt: CellId, src_degree: i64, tgt_degree: i64, shift: i64 },

    #[error("dimension mismatch in {context}: expected {expected:?}, found {found:?}")]
    DimensionMismatch { context: String, expected: (usize, usize), found: (usize, usize) },

    #[error("duplicate component {0} -> {1}")]
    DuplicateComponent(CellId, CellId),

    #[error("graded map shift mismatch: expected {expected}, found {found}")]
    ShiftMismatch { expected: i64, found: i64 },

    #[error("d^2 != 0: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    DSquaredNonzero(Vec<DSquaredViolation>),

    #[error("invalid matching: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidMatching(Vec<MatchingError>),

    #[error("directed cycle: {}", .0.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(" -> "))]
    Cycle(Vec<CellId>),

    #[error("perturbation not locally nilpotent within bound {0}")]
    NotNilpotent(usize),

    #[error("contraction identities violated:\n{0}")]
    IdentityViolation(Box<IdentityReport>),

    #[error("path enumeration exceeded {0} paths")]
    PathLimit(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Failures of a mathematical condition (as opposed to malformed input).
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::DSquaredNonzero(_)
                | Error::InvalidMatching(_)
                | Error::Cycle(_)
                | Error::NotNilpotent(_)
                | Error::IdentityViolation(_)
                | Error::NotInvertible(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
