use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or inconsistent input to an operation.
    #[error("input error: {0}")]
    Input(String),

    /// A document could not be decoded; `field` names the offending field.
    #[error("parse error in `{field}`: {msg}")]
    Parse { field: String, msg: String },

    /// An exhaustive search or construction would exceed its budget.
    #[error("budget exceeded: {what} needs {needed} but the budget is {budget}")]
    Budget {
        what: String,
        needed: u128,
        budget: u128,
    },

    /// Iterated amplification stopped at the dimension budget; `chain` holds
    /// the compositions completed before the limit.
    #[error("budget exceeded after {} amplification steps: {what} needs {needed} but the budget is {budget}", chain.len())]
    AmplifyBudget {
        what: String,
        needed: u128,
        budget: u128,
        chain: Vec<crate::amplify::AmplifyReport>,
    },

    #[error("composition does not amplify: gamma {gamma} becomes {gamma_prime} at k = {k}")]
    NonAmplifying { k: usize, gamma: f64, gamma_prime: f64 },

    #[error("no NO-instance found after {attempts} attempts")]
    NoInstanceFound { attempts: usize },

    #[error("no certified code found after {attempts} attempts")]
    NoCertifiedCode { attempts: usize },

    /// NCP generators already span the whole ambient space.
    #[error("codimension zero: rank {rank} equals ambient dimension {m}")]
    CodimensionZero { rank: usize, m: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            msg: msg.into(),
        }
    }

    pub(crate) fn budget(what: impl Into<String>, needed: u128, budget: u128) -> Self {
        Error::Budget {
            what: what.into(),
            needed,
            budget,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
