use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state {state} is not valid for an alphabet of size {p}")]
    InvalidState { state: u64, p: u32 },

    #[error("rule number {number} does not fit: rules over p={p}, k={k} are numbered below {p}^({p}^{k})")]
    RuleNumberOverflow { number: String, p: u32, k: u32 },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("capacity exceeded: {what} needs {required} but the cap is {cap}")]
    Capacity {
        what: &'static str,
        required: String,
        cap: u64,
    },

    #[error("oracle budget exceeded: enumerating {p}^{n} configurations is above the budget of {budget}")]
    OracleBudget { p: u32, n: usize, budget: u64 },

    #[error("bucket budget exceeded: no cycle or extinction within {max_buckets} buckets")]
    BucketBudget { max_buckets: usize },

    #[error("checkpoint {path} failed integrity check: {reason}")]
    Integrity { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by a resource limit rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::Capacity { .. } | Error::OracleBudget { .. } | Error::BucketBudget { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
