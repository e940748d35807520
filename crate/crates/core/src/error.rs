use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::scheme::Configuration;

pub type Result<T> = core::result::Result<T, UrnError>;

/// Structural invariant that a scheme or distribution failed to satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Invariant {
    #[error("probability sum is {0}, expected 1")]
    ProbabilitySum(String),
    #[error("probability {0} is negative")]
    NegativeProbability(String),
    #[error("empty support")]
    EmptySupport,
    #[error("duplicate support value {0}")]
    DuplicateValue(String),
    #[error("realization has {found} entries, expected {expected}")]
    RowWidth { expected: usize, found: usize },
    #[error("at most one complement entry is allowed per row")]
    MultipleComplements,
    #[error("scheme needs at least two colors, found {0}")]
    TooFewColors(usize),
    #[error("duplicate color name {0:?}")]
    DuplicateColor(String),
    #[error("{rows} rows for {colors} colors")]
    RowCount { colors: usize, rows: usize },
    #[error("initial configuration has {found} counts, expected {expected}")]
    InitialWidth { expected: usize, found: usize },
    #[error("initial configuration is empty")]
    EmptyInitial,
    #[error("declared balance {declared} differs from the rows' balance {actual}")]
    DeclaredBalance { declared: i64, actual: i64 },
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UrnError {
    #[error("invariant violated: {0}")]
    Invariant(#[from] Invariant),

    #[error("balance violation in row {row}: realization {realization:?} sums to {sum}, expected {expected}")]
    BalanceViolation {
        row: usize,
        realization: Vec<i64>,
        sum: i64,
        expected: i64,
    },

    #[error("negative balance {0}")]
    NegativeBalance(i64),

    #[error("drawing color {color} in {configuration} with rule {realization:?} drives a count negative")]
    NegativeCount {
        configuration: Configuration,
        color: usize,
        realization: Vec<i64>,
    },

    #[error("deadlock at step {step} in configuration {configuration}")]
    DeadlockEncountered {
        step: usize,
        configuration: Configuration,
    },

    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("series known to order {available}, order {needed} requested")]
    TruncationTooSmall { needed: usize, available: usize },

    #[error("leading coefficient is not a single monomial, reciprocal undefined")]
    NonUnitLeadingTerm,

    #[error("color index {color} out of range for {colors} colors")]
    ColorOutOfRange { color: usize, colors: usize },

    #[error("probability denominators exceed 64 bits; sampler cannot represent them")]
    SamplerPrecision,

    #[error("domain error: {0}")]
    Domain(String),
}
