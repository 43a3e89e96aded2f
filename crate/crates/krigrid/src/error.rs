use thiserror::Error;

/// Errors surfaced by the numerical routines.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("bessel_k domain error: nu = {nu}, x = {x}")]
    BesselDomain { nu: f64, x: f64 },
    #[error("bessel_k range error (overflow or underflow): nu = {nu}, x = {x}")]
    BesselRange { nu: f64, x: f64 },
    #[error("invalid covariance parameters: {0}")]
    InvalidParams(String),
    #[error("grid enumeration overflow: {side}^{dim} exceeds usize")]
    GridOverflow { side: usize, dim: usize },
    #[error("invalid design: {0}")]
    InvalidDesign(String),
    #[error("covariance matrix not numerically positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
    #[error("optimization failed: {0}")]
    Optim(String),
    #[error("covariance sequence decay fit failed: {0}")]
    DecayFit(String),
    #[error("spectral density too close to zero: min = {min_f:e}")]
    SpectrumFloor { min_f: f64 },
    #[error("ill-conditioned matrix: condition number {cond:e}")]
    IllConditioned { cond: f64 },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
