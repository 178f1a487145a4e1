use thiserror::Error;

/// Errors reported by decision and synthesis operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: non-finite entries, bad dimensions, invalid tolerances.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Operands whose shapes cannot be combined.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An operation was called outside its stated domain.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// A violation is certified but no explicit witness vector was located
    /// within the sampling budget.
    #[error("witness search failed: {0}")]
    WitnessSearchFailed(String),

    /// The line-search bracket expanded past its cap without enclosing a
    /// maximizer and the caller required convergence.
    #[error("line search budget exhausted: {0}")]
    BudgetExhausted(String),

    /// Two independent decision routes disagree. Signals a tolerance-boundary
    /// instance or an implementation bug; the payload carries both raw outputs.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}
