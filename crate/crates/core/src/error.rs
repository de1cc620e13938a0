use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// An iterative method did not reach the requested accuracy.
    #[error("{op} did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence {
        op: &'static str,
        iterations: usize,
        residual: f64,
        /// Last bracketing interval for root finders, if any.
        bracket: Option<(f64, f64)>,
    },

    /// Mode or anti-mode requested for a distribution that has neither.
    #[error("{0} has no interior mode or anti-mode")]
    ShapeClass(String),

    /// Precondition of an ordering-based comparison not met.
    #[error("ordering precondition failed: {0}")]
    Ordering(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }
}
