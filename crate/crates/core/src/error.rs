use thiserror::Error;

/// Errors returned by the geometry kernel and everything built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: dimension mismatch, non-finite data, violated precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// An iterative or pivoting solver stopped without converging.
    #[error("solver failure: {message}")]
    SolverFailure {
        message: String,
        /// Best objective value seen before giving up, if any.
        incumbent: Option<f64>,
        /// Point at which `incumbent` was attained.
        incumbent_point: Option<Vec<f64>>,
    },

    /// A product enumeration would exceed the configured size cap.
    #[error("budget exceeded: {what} needs {needed} entries, cap is {cap}")]
    Budget {
        what: &'static str,
        needed: u128,
        cap: usize,
    },

    /// `target` lies outside the convex hull; `separator` satisfies
    /// `separator . target > max_i separator . points_i`.
    #[error("target is not in the convex hull")]
    NotInHull { separator: Vec<f64> },

    /// No optimal-containment certificate exists (degenerate radius 0).
    #[error("no certificate: {0}")]
    NoCertificate(String),

    /// An input violated a guarantee that should hold for valid data.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn solver(msg: impl Into<String>) -> Self {
        Error::SolverFailure {
            message: msg.into(),
            incumbent: None,
            incumbent_point: None,
        }
    }
}
