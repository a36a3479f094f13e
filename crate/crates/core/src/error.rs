use thiserror::Error;

/// Errors raised by the solver and its building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The constraint Jacobian does not have full row rank.
    #[error("constraint Jacobian is rank deficient (rank {rank} < {m} rows)")]
    RankDeficient { rank: usize, m: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A Lanczos-CG recurrence produced a non-finite quantity.
    #[error("numerical breakdown in shifted CG at shift {shift}, inner step {step}")]
    NumericalBreakdown { shift: usize, step: usize },

    /// No ladder shift can serve as a regularization multiplier.
    #[error("shift ladder exhausted: {0}")]
    LadderExhausted(String),

    /// The predicted model decrease is too small to form an acceptance ratio.
    #[error("degenerate model decrease {decrease:e} (merit value {merit:e})")]
    DegenerateModel { decrease: f64, merit: f64 },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
