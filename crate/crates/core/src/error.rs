use thiserror::Error;

use crate::group::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group parameter: {0}")]
    InvalidParameter(String),

    #[error("group order {order} exceeds the configured limit {limit}")]
    OrderTooLarge { order: usize, limit: usize },

    #[error("cayley table violates a group axiom: {0}")]
    AxiomViolation(Violation),

    #[error("generator set is empty")]
    EmptyGenerators,

    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("subset is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("map is not a homomorphism: map[{i}*{j}] != map[{i}]*map[{j}]")]
    NotAHomomorphism { i: usize, j: usize },

    #[error("operands live on different groups")]
    GroupMismatch,

    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },

    #[error("negative weight at index {index}")]
    NegativeWeight { index: usize },

    #[error("total mass is {sum}, expected 1")]
    MassNotOne { sum: String },

    #[error("measure has empty support")]
    EmptySupport,

    #[error("support orbit did not repeat within {max_steps} steps")]
    MaxStepsExceeded { max_steps: usize },

    #[error("measure is not acyclic (support orbit has period {period})")]
    NotAcyclic { period: usize },

    #[error("epsilon must be positive")]
    NonPositiveEpsilon,

    #[error("power iteration did not settle within {max_iter} multiplications")]
    NoConvergence { max_iter: usize },

    #[error("exact matrix exceeds the size guard ({bytes} bytes > {limit} bytes)")]
    SizeGuard { bytes: usize, limit: usize },

    #[error("claimed accumulation point {index} does not match iteration (deviation {deviation:e})")]
    VerificationFailed { index: usize, deviation: f64 },

    #[error("monte carlo budget exceeded: {requested} step draws > {budget}")]
    BudgetExceeded { requested: u64, budget: u64 },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "INVALID_PARAMETER",
            Error::OrderTooLarge { .. } => "ORDER_TOO_LARGE",
            Error::AxiomViolation(_) => "AXIOM_VIOLATION",
            Error::EmptyGenerators => "EMPTY_GENERATORS",
            Error::IndexOutOfRange { .. } => "INDEX_OUT_OF_RANGE",
            Error::NotASubgroup(_) => "NOT_A_SUBGROUP",
            Error::NotAHomomorphism { .. } => "NOT_A_HOMOMORPHISM",
            Error::GroupMismatch => "GROUP_MISMATCH",
            Error::WrongLength { .. } => "WRONG_LENGTH",
            Error::NegativeWeight { .. } => "NEGATIVE_WEIGHT",
            Error::MassNotOne { .. } => "MASS_NOT_ONE",
            Error::EmptySupport => "EMPTY_SUPPORT",
            Error::MaxStepsExceeded { .. } => "MAX_STEPS_EXCEEDED",
            Error::NotAcyclic { .. } => "NOT_ACYCLIC",
            Error::NonPositiveEpsilon => "NON_POSITIVE_EPSILON",
            Error::NoConvergence { .. } => "NO_CONVERGENCE",
            Error::SizeGuard { .. } => "SIZE_GUARD",
            Error::VerificationFailed { .. } => "VERIFICATION_FAILED",
            Error::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            Error::Inconsistent(_) => "INCONSISTENT",
            Error::Parse(_) => "PARSE",
            Error::ModeMismatch(_) => "MODE_MISMATCH",
        }
    }

    /// Whether the error stems from malformed input rather than a domain condition.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::ModeMismatch(_))
    }
}
