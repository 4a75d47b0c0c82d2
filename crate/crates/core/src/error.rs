use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A discretisation residual exceeded its configured gate.
    #[error("resolution gate failed: {what} = {value:.3e} exceeds gate {gate:.3e}")]
    Resolution { what: String, value: f64, gate: f64 },

    /// A resolvent was requested on the real axis.
    #[error("resolvent pole: sigma = {0} is real")]
    Pole(f64),

    /// A dilation or grid operation left the discrete grid.
    #[error("range error: {0}")]
    Range(String),

    /// The minimiser hit the boundary of its search interval.
    #[error("optimisation failure: {0}")]
    Optimization(String),

    /// An iterative method did not converge.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// A multiplier blew up on the coefficient support.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
