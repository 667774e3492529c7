use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(
        "circulant embedding is not non-negative definite (min eigenvalue {min_eigenvalue:e})"
    )]
    NotNonNegativeDefinite { min_eigenvalue: f64 },
    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("degenerate correlation: rho_max = {0} must be below 1")]
    DegenerateCorrelation(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
