use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spectral coefficients are not Hermitian-symmetric (relative residue {residue:.3e})")]
    HermitianViolation { residue: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature error: {0}")]
    Quadrature(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("Krylov iteration did not converge after {iterations} iterations (relative residual {relres:.3e})")]
    NonConvergence { iterations: usize, relres: f64 },

    #[error("Richardson extrapolation residual {residual:.3e} exceeds {limit:.1e}")]
    Extrapolation { residual: f64, limit: f64 },

    #[error("recovery mask is empty: no node where |u| exceeds the threshold")]
    EmptyMask,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("field file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
