use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A projective or affine enumeration would exceed the configured cap.
    #[error("EnumerationTooLarge: {needed} vectors exceed cap {cap}")]
    EnumerationTooLarge { needed: u128, cap: u128 },

    /// The exact dynamic program would exceed its state-update budget.
    #[error("ExactEngineTooLarge: {cost} state updates exceed budget {budget} (try --mode mc)")]
    ExactEngineTooLarge { cost: u128, budget: u128 },

    #[error("ConditioningOnNull: the conditioning event has density 0")]
    ConditioningOnNull,

    #[error("PetalTooSmall: petal support {support} is below required {required}")]
    PetalTooSmall { support: usize, required: usize },

    #[error("DegenerateDistribution: marginal distribution is uniform")]
    DegenerateDistribution,

    #[error("RetryExhausted: rejection sampling gave up after {attempts} attempts")]
    RetryExhausted { attempts: usize },

    #[error("NoNontrivialWitness: L = {l} leaves no coefficient tuple to build on")]
    NoNontrivialWitness { l: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EnumerationTooLarge { .. }
            | Error::ExactEngineTooLarge { .. }
            | Error::RetryExhausted { .. } => 3,
            _ => 2,
        }
    }
}
