use thiserror::Error;

/// Errors raised by the numerical kernels and the physical models built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Adaptive quadrature never met its convergence target.
    #[error(
        "quadrature did not converge by order {order}: last estimates {previous:e} and {last:e}"
    )]
    AccuracyFailure {
        order: usize,
        previous: f64,
        last: f64,
    },

    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    /// A parameter lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller broke an operation's precondition (asymmetric matrix, wrong alignment, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A covariance matrix violates the uncertainty principle.
    #[error("unphysical covariance matrix: {reason} (offending value {value:e})")]
    Unphysical { reason: String, value: f64 },

    /// The relative entropy is infinite because the supports do not nest.
    #[error("relative entropy diverges: {0}")]
    Divergence(String),

    /// The printed closed form leaves its real domain for these parameters.
    #[error("closed form undefined: {0}")]
    ClosedFormDomain(String),

    #[error("malformed record: {0}")]
    MalformedRecord(String),

    /// No type-II errors were observed, so only a lower bound on the exponent is known.
    #[error(
        "inconclusive estimate: no type-II errors in {trials} trials at n = {n}; exponent >= {exponent_lower_bound:e}"
    )]
    Inconclusive {
        n: usize,
        trials: usize,
        exponent_lower_bound: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
