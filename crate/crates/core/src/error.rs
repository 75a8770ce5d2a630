use thiserror::Error;

/// Errors produced by every fallible operation in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the formulas are defined.
    #[error("invalid `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    /// A hyperbolic or exponential argument exceeds the double-precision budget.
    #[error("overflow evaluating {quantity}: argument {argument} exceeds {limit}")]
    Overflow {
        quantity: &'static str,
        argument: f64,
        limit: f64,
    },

    /// The truncated Fock basis is too small for the requested state.
    #[error("Fock truncation at dim {dim} leaks {leaked:e} of the population (limit {limit:e})")]
    Truncation { dim: usize, leaked: f64, limit: f64 },

    /// A series expansion failed to converge.
    #[error("{what} did not converge after {iterations} terms")]
    Convergence {
        what: &'static str,
        iterations: usize,
    },

    /// A bracketing root finder was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A bracketing root finder ran out of iterations.
    #[error("root finder exceeded {iterations} iterations (bracket [{lo}, {hi}])")]
    MaxIterations { iterations: usize, lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn overflow(quantity: &'static str, argument: f64, limit: f64) -> Self {
        Error::Overflow {
            quantity,
            argument,
            limit,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
