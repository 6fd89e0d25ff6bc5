use thiserror::Error;

/// Error type shared by every solver and generator in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a structural invariant. The message names the
    /// offending field or path step.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The implied state space is larger than the configured budget, or an
    /// intermediate count overflowed.
    #[error("state budget exceeded: instance needs {needed} states, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    /// The requested method cannot handle this instance. The message says
    /// which method can.
    #[error("unsupported instance: {0}")]
    Unsupported(String),

    /// Rejection sampling gave up.
    #[error("generation failed after {attempts} attempts: no pure equilibrium found")]
    GenerationFailed { attempts: u32 },

    /// The simplex loop hit its pivot ceiling.
    #[error("pivot limit exceeded after {0} pivots")]
    PivotLimitExceeded(u64),

    /// A postcondition that should hold by construction was violated.
    /// Signals a bug in this crate, never bad user input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
