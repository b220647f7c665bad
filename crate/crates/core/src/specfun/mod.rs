//! Special functions: Γ, Bessel functions of the first kind and their
//! zeros, and the Jacobi/Legendre/Chebyshev polynomial families.

mod bessel;
mod gamma;
mod poly;
mod zeros;

use thiserror::Error;

pub use bessel::{bessel_j, bessel_j_pair, bessel_norm_sq, BESSEL_X_MAX};
pub use gamma::gamma_fn;
pub use poly::{poly_eval, poly_norm_sq, PolyFamily, POLY_MAX_DEGREE};
pub use zeros::{bessel_zero, BesselZeroCache, BesselZeroTable, ZERO_CACHE_VERSION};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("{what}: argument outside the supported domain ({detail})")]
    Domain { what: &'static str, detail: String },
    #[error("gamma: pole at {0}")]
    Pole(f64),
    #[error("gamma: overflow at {0}")]
    Overflow(f64),
    #[error("bessel zero search failed for nu = {nu}, n = {n}: {detail}")]
    Convergence { nu: f64, n: usize, detail: String },
    #[error("zero cache: {0}")]
    Cache(String),
}

pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> SpecfunError {
    SpecfunError::Domain {
        what,
        detail: detail.into(),
    }
}
