//! Jacob's ladders built numerically from the Hardy Z-function.
//!
//! The crate evaluates θ(t), Z(t) and |ζ(½+it)|², integrates the ladder
//! φ₁ from its derivative Z²(t)/ln t, and checks the weighted orthogonality
//! of Bessel functions and classical orthogonal polynomials transported
//! through φ₁.
//!
//! Module map:
//!
//! * [`rszeta`]: θ, Z and |ζ(½+it)|² (Riemann–Siegel plus an Euler–Maclaurin oracle).
//! * [`specfun`]: Γ, J_ν, Bessel zeros, Jacobi/Legendre/Chebyshev families.
//! * [`quadrature`]: adaptive Gauss–Kronrod and tanh–sinh integration.
//! * [`ladder`]: the checkpointed ladder table, inversion, prime counting.
//! * [`verify`]: the orthogonality and asymptotic integral checks.
//! * [`cli`]: run configuration, caching and report emission.

#![allow(clippy::excessive_precision)]
// `!(x < y)` is used deliberately so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod ladder;
pub mod quadrature;
pub mod rszeta;
pub mod specfun;
pub mod sum;
pub mod verify;

pub use ladder::{build_ladder, LadderConfig, LadderTable, PrimePi};
pub use quadrature::{EndpointFlags, QuadratureResult};
pub use rszeta::ZEvaluator;
pub use verify::{EquationId, VerificationReport};
