use thiserror::Error;

/// Errors raised by grid construction, discretization and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("singular mapping: Jacobian {jacobian:e} at node ({i}, {j})")]
    SingularMapping { i: usize, j: usize, jacobian: f64 },

    #[error("non-monotone mapping: {0}")]
    NonMonotoneMapping(String),

    #[error("node ({i}, {j}) is outside the interior stencil range")]
    OutOfStencil { i: usize, j: usize },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("ill-posed problem at node ({i}, {j}): {reason}")]
    IllPosed { i: usize, j: usize, reason: String },

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("coupling did not converge after {iterations} iterations (last change {change:e})")]
    CouplingNonConvergence {
        iterations: usize,
        change: f64,
        history: Vec<f64>,
    },

    #[error("dense oracle failure: {0}")]
    OracleFailure(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular amplification: denominator vanishes")]
    SingularAmplification,

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("convergence order undefined for errors ({coarse:e}, {fine:e})")]
    UndefinedOrder { coarse: f64, fine: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
