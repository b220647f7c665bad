//! Jacob's ladder φ₁ built from its derivative Z̃²(t) = Z²(t)/ln t.
//!
//! The ladder is stored as checkpoint values on a uniform grid (step
//! ≤ 0.05) and evaluated between checkpoints by integrating Z̃² from the
//! nearest checkpoint to the left. The additive constant is pinned by the
//! retardation law at an anchor: φ₁(t₀) = t₀ − (1−c)π(t₀).

mod cache;
mod chart;
mod diagnostics;
mod primes;
mod table;

use thiserror::Error;

use crate::quadrature::QuadError;
use crate::rszeta::{ZEvaluator, ZetaError};

pub use cache::{LADDER_CACHE_VERSION, LadderCache};
pub use chart::{pushforward_integral, ChartPoint, LocalChart};
pub use diagnostics::{log_stability_check, retardation_report, RetardationRow};
pub use primes::{PrimePi, EULER_GAMMA};
pub use table::{build_ladder, LadderConfig, LadderTable, DEFAULT_STEP, PANEL_RULE};

#[derive(Debug, Error)]
pub enum LadderError {
    #[error("{what}: {value} outside [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("panel [{a}, {b}] did not reach tolerance (error {error:e}) after maximal refinement")]
    TolNotMet { a: f64, b: f64, error: f64 },
    #[error("U = {u} is not admissible at T = {t}: need 0 < U <= T/ln T = {bound}")]
    Admissibility { t: f64, u: f64, bound: f64 },
    #[error("invalid ladder configuration: {0}")]
    Config(String),
    #[error("ladder cache: {0}")]
    Cache(String),
    #[error("ladder cache was built for configuration {found}, expected {expected}")]
    CacheMismatch { expected: String, found: String },
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Z̃²(t) = Z(t)²/ln t, the density of φ₁. Requires t > e.
pub fn ztilde_sq(ev: &ZEvaluator, t: f64) -> Result<f64, LadderError> {
    if !(t > std::f64::consts::E && t.is_finite()) {
        return Err(LadderError::Domain {
            what: "ztilde_sq",
            value: t,
            lo: std::f64::consts::E,
            hi: f64::INFINITY,
        });
    }
    Ok(ev.zeta_sq_mod(t)? / t.ln())
}

/// Checks 0 < U ≤ T/ln T.
pub fn check_admissible(t: f64, u: f64) -> Result<(), LadderError> {
    let bound = t / t.ln();
    if !(u > 0.0 && u <= bound && t > 1.0) {
        return Err(LadderError::Admissibility { t, u, bound });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ztilde_at_a_zero_and_at_1e4() {
        let ev = ZEvaluator::default();
        // first zero, oracle route
        assert!(ztilde_sq(&ev, 14.134_725_141_734_693).unwrap() < 1e-12);
        let z = ev.z_oracle(1e4).unwrap();
        let v = ztilde_sq(&ev, 1e4).unwrap();
        assert!((v - z * z / 1e4f64.ln()).abs() < 1e-9);
        assert!(ztilde_sq(&ev, 2.7).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(check_admissible(1e4, 1.0).is_ok());
        assert!(check_admissible(1e4, 0.0).is_err());
        assert!(check_admissible(100.0, 30.0).is_err());
    }
}
