use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("channel has {taps} taps but only {subcarriers} subcarriers")]
    ChannelTooLong { taps: usize, subcarriers: usize },

    #[error(
        "ML search space of {candidates} candidates exceeds the budget of {budget}; \
         use a heuristic detector (pso, de) instead"
    )]
    MlBudgetExceeded { candidates: u128, budget: u128 },

    #[error("unsupported modulation order {0} (expected 4, 16 or 256)")]
    UnsupportedModulation(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SimError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        SimError::InvalidParameter { name, reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
