use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("decomposition unstable: condition number {0:.3e}")]
    DecompositionUnstable(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("spectral parameter {0} is not generic")]
    NotGeneric(String),
    #[error("quadrature did not converge: {0}")]
    Convergence(String),
    #[error("exceeds budget: {0}")]
    Budget(String),
    #[error("objective unbounded below")]
    UnboundedBelow,
}

pub type Result<T> = std::result::Result<T, Error>;
