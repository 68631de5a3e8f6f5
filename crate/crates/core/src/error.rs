use thiserror::Error;

/// Errors surfaced by the algebraic substrate and the dynamical evaluators.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// A log-space polynomial evaluation was requested below the radius at
    /// which the leading term provably dominates the remaining terms.
    #[error("dominance not reached: need log-modulus > {needed:.6}, have {have:.6}")]
    DominanceNotReached { needed: f64, have: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("degree budget exceeded: degree {degree} > budget {budget}")]
    DegreeBudgetExceeded { degree: u64, budget: u64 },

    #[error("point outside the required sector/region: {0}")]
    SectorViolation(String),

    #[error("telescoping correction left the unit disk about 1 at factor {factor}")]
    BranchViolation { factor: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
