//! Covariance parameter estimation for Gaussian processes observed on
//! randomly perturbed regular grids.
//!
//! The crate covers the full chain from kernel evaluation to experiment
//! outputs: Matérn correlation with parameter and lag derivatives,
//! perturbed grid designs, exact Gaussian simulation, maximum likelihood
//! and leave-one-out cross validation estimators, random-trace estimates
//! of the asymptotic covariance matrices, independent closed forms on the
//! regular grid via spectral mean values, and integrated Kriging
//! prediction error.

pub mod bessel;
pub mod linalg;
mod error;

pub use error::{CoreError, Result};
