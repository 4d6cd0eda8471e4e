use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the channel-model library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result cannot be represented (overflow) or the argument exceeds the supported range.
    #[error("range error: {0}")]
    Range(String),

    /// A numerical integral did not reach the requested tolerance.
    #[error("quadrature did not converge with {nodes} nodes: estimate {estimate}, error bound {error:e}")]
    Accuracy {
        estimate: Complex64,
        error: f64,
        nodes: usize,
    },

    /// Inconsistent or incomplete model configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A sampled grid is too short or too coarse for the requested transform.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// Realized samples fall outside the requested histogram bins.
    #[error("histogram coverage error: {0}")]
    Coverage(String),

    /// A root or crossing was not found inside the search bound.
    #[error("search error: {0}")]
    Search(String),

    /// Invalid combination of command-line options.
    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
