use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A step index past the last defined distribution was requested.
    #[error("requested {requested} steps but the family is only defined through step {available}")]
    Horizon { requested: usize, available: usize },

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of budget before meeting its tolerance.
    #[error(
        "quadrature did not converge: estimate {value} with error {estimated_error:e} \
         > tol {tol:e} after {intervals} subintervals"
    )]
    Quadrature {
        value: f64,
        estimated_error: f64,
        tol: f64,
        intervals: usize,
    },

    /// A combinatorial computation exceeds its configured limit.
    #[error("capacity exceeded: {what} requires {required:e} > limit {limit:e}; {hint}")]
    Capacity {
        what: &'static str,
        required: f64,
        limit: f64,
        hint: &'static str,
    },

    #[error("config error: {0}")]
    Config(String),

    /// A solver that must be deterministic produced two different answers.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
