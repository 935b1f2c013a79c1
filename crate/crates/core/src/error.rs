use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A field cannot be represented on the requested grid.
    #[error("resolution error: {reason} (need at least n = {required_n})")]
    Resolution { reason: String, required_n: usize },

    /// A work budget (tensor nodes, dimensions, ...) would be exceeded.
    #[error("resource error: {what} = {requested} exceeds the budget {budget}")]
    Resource {
        what: String,
        requested: u128,
        budget: u128,
    },

    /// The diffusion coefficient has non-positive real part at a grid point.
    #[error("coefficient degeneracy: Re(e^a) = {min_real_part:e} at grid point {index}")]
    Degenerate { min_real_part: f64, index: usize },

    /// An iterative method stopped before reaching its tolerance.
    #[error("no convergence after {iterations} iterations (relative residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// A PDE solve failed at a specific quadrature node or sample.
    #[error("solve failed at parameter point {point:?}: {source}")]
    AtNode {
        point: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by invalid inputs rather than numerical failure.
    pub fn is_precondition(&self) -> bool {
        match self {
            Error::Domain(_) | Error::Resolution { .. } | Error::Resource { .. } => true,
            Error::AtNode { source, .. } => source.is_precondition(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
