use thiserror::Error;

use crate::nearness::ColumnSlackReport;
use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("eigenvector column {column} does not satisfy A x = lambda x")]
    EigenvectorMismatch { column: usize },

    #[error("spectrum is not closed under conjugation: entry {index} has no partner")]
    NotConjugateClosed { index: usize },

    #[error("infeasible shift: column {column} turns negative below threshold {threshold}")]
    Infeasible { column: usize, threshold: Rational },

    #[error("column slack condition x_j <= 1 + n a_j fails at column {}", .0.first_violation.map_or(0, |j| j + 1))]
    SlackConditionFails(Box<ColumnSlackReport>),

    #[error("matrix is not in the row/column-sum-one set: {0}")]
    NotUnitSum(String),

    #[error("Perron normalization failed: {0}")]
    Normalization(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for malformed input (as opposed to numeric or precondition failures).
    pub fn is_format_error(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
