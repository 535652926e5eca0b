use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("branch cut: {0}")]
    BranchCut(String),
    #[error("divergent: {0}")]
    Divergence(String),
    #[error("quadrature did not reach tolerance: {0}")]
    Quadrature(String),
    #[error("contour integral unreliable: {0}")]
    Contour(String),
    #[error("not supported: {0}")]
    NotSupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
