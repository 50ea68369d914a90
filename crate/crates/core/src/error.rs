use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The envelope equations carry a `cot(nu)` term that is undefined at
    /// `nu = 0, pi`.
    #[error("singular spin coordinate at tau = {tau}: |sin(nu)| = {sin_nu:e}")]
    SingularCoordinate { tau: f64, sin_nu: f64 },

    #[error("eigenvalue iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize, matrix: DMatrix<f64> },

    #[error("eigenpair residual {residual:e} exceeds {bound:e} for multiplier {multiplier}")]
    EigenResidual { multiplier: num_complex::Complex64, residual: f64, bound: f64 },

    #[error("non-finite fundamental matrix at tau = {tau}")]
    NonFinite { tau: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
