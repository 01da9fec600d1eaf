//! Error types.
//!
//! Cell coordinates in [`ValidationError`] are 1-based, matching the
//! `b_ij` notation users type into forms and files.

use thiserror::Error;

use crate::consensus::ConsensusTrace;
use crate::consistency::ConsistencyReport;

/// A structural problem with a candidate preference relation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("invalid linguistic scale: {reason}")]
    InvalidScale { reason: String },
    #[error("matrix must have at least 3 alternatives, got {n}")]
    TooSmall { n: usize },
    #[error("matrix is not square: row {row} has {found} cells, expected {expected}")]
    NotSquare { row: usize, found: usize, expected: usize },
    #[error("declared n = {declared} does not match {found} rows")]
    DeclaredSize { declared: usize, found: usize },
    #[error("cell ({i},{j}) is empty")]
    EmptyCell { i: usize, j: usize },
    #[error("cell ({i},{j}) holds a non-numeric or non-finite index")]
    NonNumeric { i: usize, j: usize },
    #[error("cell ({i},{j}) holds index {value} outside [0, {max}]")]
    IndexOutOfRange { i: usize, j: usize, value: f64, max: f64 },
    #[error("cell ({i},{j}) is not in ascending order (minimum must not exceed maximum)")]
    OrderingViolation { i: usize, j: usize },
    #[error("diagonal cell ({i},{i}) must be exactly {{s_tau}}")]
    DiagonalViolation { i: usize },
    #[error("cells ({i},{j}) and ({j},{i}) have different lengths")]
    LengthMismatch { i: usize, j: usize },
    #[error("cells ({i},{j}) and ({j},{i}) are not reciprocal: HFLE(i,j)max + HFLE(j,i)min must equal s_2tau")]
    ReciprocityViolation { i: usize, j: usize },
}

impl ValidationError {
    /// The portal input rule a violation breaks: 1 (numeric subscripts in
    /// range), 2 (min not above max) or 3 (reciprocity). Structural errors
    /// that no form rule covers return `None`.
    pub fn portal_rule(&self) -> Option<u8> {
        match self {
            Self::NonNumeric { .. } | Self::IndexOutOfRange { .. } | Self::EmptyCell { .. } => Some(1),
            Self::OrderingViolation { .. } => Some(2),
            Self::ReciprocityViolation { .. } | Self::LengthMismatch { .. } | Self::DiagonalViolation { .. } => Some(3),
            _ => None,
        }
    }

    /// The offending cell as 1-based `(i, j)`, if the error is cell-specific.
    pub fn cell(&self) -> Option<(usize, usize)> {
        match *self {
            Self::EmptyCell { i, j }
            | Self::NonNumeric { i, j }
            | Self::IndexOutOfRange { i, j, .. }
            | Self::OrderingViolation { i, j }
            | Self::LengthMismatch { i, j }
            | Self::ReciprocityViolation { i, j } => Some((i, j)),
            Self::DiagonalViolation { i } => Some((i, i)),
            _ => None,
        }
    }
}

/// Errors raised by the algorithms.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("consistency index is undefined for n = {n} (requires n >= 3)")]
    UndefinedForN { n: usize },
    #[error("no published critical value for n = {n}, alpha offset {offset}")]
    OutOfTable { n: usize, offset: f64 },
    #[error("consistency repair hit the iteration cap after {} iterations", report.iterations)]
    IterationCapExceeded { report: Box<ConsistencyReport> },
    #[error("consensus loop hit the cap of {cap} rounds")]
    ConsensusCapExceeded { cap: usize, trace: Box<ConsensusTrace> },
    #[error("decision maker {dm}: {source}")]
    DecisionMaker {
        dm: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("a group needs at least 2 decision makers, got {k}")]
    TooFewDecisionMakers { k: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Whether the error is an iteration cap in either algorithm, possibly
    /// wrapped with a decision-maker index.
    pub fn is_iteration_cap(&self) -> bool {
        match self {
            Self::IterationCapExceeded { .. } | Self::ConsensusCapExceeded { .. } => true,
            Self::DecisionMaker { source, .. } => source.is_iteration_cap(),
            _ => false,
        }
    }

    /// Whether the error stems from invalid input data or parameters.
    pub fn is_input_error(&self) -> bool {
        match self {
            Self::Validation(_)
            | Self::DimensionMismatch { .. }
            | Self::InvalidParameter { .. }
            | Self::UndefinedForN { .. }
            | Self::OutOfTable { .. }
            | Self::TooFewDecisionMakers { .. } => true,
            Self::DecisionMaker { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
