use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Inconsistent or invalid parameters (mixed fields, bad flags, unsupported q).
    #[error("configuration error: {0}")]
    Config(String),

    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("pole of the zeta function at s = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("numerical error: {0}")]
    Numerical(String),

    /// A sweep would exceed the configured discriminant budget.
    #[error("refusing infeasible sweep: {family_size} discriminants exceeds budget {budget} (estimated cost {estimate})")]
    Infeasible {
        family_size: u128,
        budget: u128,
        estimate: String,
    },

    /// A checked mathematical property did not hold.
    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
