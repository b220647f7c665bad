//! Numerical integration engine.
//!
//! Two integrand classes show up in this crate: smooth, oscillatory
//! integrands built from Z²(t) and Bessel/polynomial factors, and integrands
//! with algebraic endpoint singularities such as 1/√(1−u²). The first class
//! goes through [`integrate_adaptive`] (15-point Gauss–Kronrod with global
//! bisection), the second through [`integrate_singular`] (tanh–sinh).

mod gauss_kronrod;
mod tanh_sinh;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gauss_kronrod::{gauss7, gauss_kronrod_15, with_panel_budget, Adaptive, PanelEstimate, DEFAULT_MAX_PANELS};
pub use tanh_sinh::{Abscissa, TanhSinh};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("no convergence after {panels} panels: value {value}, error estimate {error_estimate}")]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        panels: usize,
    },
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
}

/// Which integration rule produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    GaussKronrod15,
    TanhSinh,
    /// Several rules were combined (e.g. tanh–sinh end pieces around a
    /// Gauss–Kronrod middle).
    Composite,
}

/// Endpoints that carry an integrable singularity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointFlags {
    pub left: bool,
    pub right: bool,
}

impl EndpointFlags {
    pub const NONE: Self = Self {
        left: false,
        right: false,
    };
    pub const LEFT: Self = Self {
        left: true,
        right: false,
    };
    pub const RIGHT: Self = Self {
        left: false,
        right: true,
    };
    pub const BOTH: Self = Self {
        left: true,
        right: true,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Panels for Gauss–Kronrod, refinement levels for tanh–sinh.
    pub panels_used: usize,
    pub rule: Rule,
    pub singular_endpoints: EndpointFlags,
}

impl QuadratureResult {
    /// Adds two results over adjacent intervals.
    pub fn combine(self, other: QuadratureResult) -> QuadratureResult {
        QuadratureResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            panels_used: self.panels_used + other.panels_used,
            rule: if self.rule == other.rule {
                self.rule
            } else {
                Rule::Composite
            },
            singular_endpoints: EndpointFlags {
                left: self.singular_endpoints.left,
                right: other.singular_endpoints.right,
            },
        }
    }
}

/// Adaptive 15-point Gauss–Kronrod integration of `f` over `[a, b]` to
/// absolute tolerance `tol`.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    Adaptive::new(tol).integrate(f, a, b)
}

/// Tanh–sinh integration of `f` over `[a, b]`. The integrand receives an
/// [`Abscissa`] carrying the node and its exact distances to both
/// endpoints, so singular factors can be formed without cancellation.
pub fn integrate_singular<F>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    singular: EndpointFlags,
) -> Result<QuadratureResult, QuadError>
where
    F: FnMut(Abscissa) -> f64,
{
    TanhSinh::new(tol).integrate(f, a, b, singular)
}

pub(crate) fn check_interval(a: f64, b: f64) -> Result<(), QuadError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(QuadError::InvalidInterval { a, b });
    }
    Ok(())
}

pub(crate) fn check_tol(tol: f64) -> Result<(), QuadError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(QuadError::InvalidTolerance(tol));
    }
    Ok(())
}
