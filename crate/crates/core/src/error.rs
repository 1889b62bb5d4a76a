use thiserror::Error;

use crate::classify::ClassLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("seed must be a positive integer, got {0}")]
    InvalidSeed(String),

    #[error("order {order} exceeds the {cap_name} cap of {cap}")]
    OrderTooLarge {
        order: usize,
        cap: usize,
        cap_name: &'static str,
    },

    #[error("series index {index} exceeds the cap of {cap}")]
    IndexTooLarge { index: usize, cap: usize },

    #[error("vector {index} is not nested in its successor")]
    NotNested { index: usize },

    #[error("at least {needed} members are required, got {got}")]
    InsufficientEvidence { needed: usize, got: usize },

    #[error("order {0} is degenerate; ratios are undefined")]
    DegenerateOrder(usize),

    #[error("label {0} belongs to a proven-empty category")]
    EmptyCategoryViolation(ClassLabel),

    #[error("invalid parity string {0:?}: expected only '0' and '1'")]
    ParseParity(String),

    #[error("invalid dyadic {0:?}: expected \"num/2^e\"")]
    ParseDyadic(String),

    #[error("invalid class label {0:?}")]
    ParseLabel(String),

    #[error("periodic unit must contain at least one bit")]
    EmptyUnit,

    #[error("generator must be 1 or 2, got {0}")]
    InvalidGenerator(u8),
}

impl Error {
    /// True for errors raised by a size cap (matrix order, series index, enumeration order).
    pub fn is_cap_violation(&self) -> bool {
        matches!(self, Error::OrderTooLarge { .. } | Error::IndexTooLarge { .. })
    }
}
