use super::{EquationId, Layer, Trap, VerificationReport, VerifyError};
use crate::quadrature::{integrate_adaptive, integrate_singular, EndpointFlags};
use crate::specfun::{bessel_j, bessel_norm_sq, bessel_zero};

const MAX_N: usize = 8;

/// Gram matrix of {J_ν(μ_n x)} under the weight x on [0, 1], entries with
/// m ≤ n. Off-diagonals must vanish and diagonals equal ½J_{ν+1}(μ_n)².
pub fn verify_bessel_baseline(nu: f64, max_n: usize, tol: f64) -> Result<Vec<VerificationReport>, VerifyError> {
    if !(nu > -1.0 && nu.is_finite()) || max_n == 0 || max_n > MAX_N || !(tol > 0.0) {
        return Err(VerifyError::Request(format!(
            "baseline needs nu > -1, 1 <= max_n <= {MAX_N}, tol > 0 (got nu = {nu}, max_n = {max_n}, tol = {tol})"
        )));
    }
    let mu = (1..=max_n).map(|n| bessel_zero(nu, n)).collect::<Result<Vec<_>, _>>()?;
    let quad_tol = (tol * 1e-3).max(1e-15);
    let mut out = Vec::new();
    for m in 1..=max_n {
        for n in m..=max_n {
            let (mm, mn) = (mu[m - 1], mu[n - 1]);
            let mut trap = Trap::default();
            let mut f = |x: f64| trap.catch(bessel_j(nu, mm * x)) * trap.catch(bessel_j(nu, mn * x)) * x;
            // x^{2ν+1} is singular at 0 for ν < −½ and not smooth for
            // non-integer ν; tanh–sinh handles both.
            let res = if nu.fract() != 0.0 {
                integrate_singular(|p| f(p.from_a), 0.0, 1.0, quad_tol, EndpointFlags::LEFT)
            } else {
                integrate_adaptive(&mut f, 0.0, 1.0, quad_tol)
            };
            trap.check()?;
            let res = res?;
            let rhs = if m == n { bessel_norm_sq(nu, n)? } else { 0.0 };
            let r = VerificationReport::new(EquationId::E1_2, Layer::Exact, res.value, rhs)
                .param("nu", nu)
                .param("m", m as f64)
                .param("n", n as f64)
                .quad(res.error_estimate);
            let passed = r.abs_error <= tol;
            out.push(r.judged(tol, passed));
        }
    }
    Ok(out)
}
