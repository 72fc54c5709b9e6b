//! Library error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge: best estimate {estimate:?}, error {error:e}")]
    QuadratureNoConvergence { estimate: num_complex::Complex64, error: f64 },
    #[error("root search failed: {0}")]
    RootSearch(String),
    #[error("linear algebra failure: {0}")]
    Linalg(String),
    #[error("evaluation point rejected: {0}")]
    PointOutsideDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
