use std::f64::consts::PI;

use num_complex::Complex64;

use super::ZetaError;

/// θ(t) from its asymptotic expansion, valid for t ≥ 1. The truncation
/// error is below 1e−12 for t ≥ 50.
pub fn theta(t: f64) -> Result<f64, ZetaError> {
    if !(t >= 1.0 && t.is_finite()) {
        return Err(ZetaError::Domain { what: "theta", t });
    }
    let r = 1.0 / t;
    let r2 = r * r;
    Ok(0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + r * (1.0 / 48.0 + r2 * (7.0 / 5760.0)))
}

/// θ(t) = −(t/2) ln π + Im ln Γ(¼ + it/2), on the continuous branch.
pub fn theta_oracle(t: f64) -> Result<f64, ZetaError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(ZetaError::Domain { what: "theta_oracle", t });
    }
    let z = Complex64::new(0.25, 0.5 * t);
    Ok(-0.5 * t * PI.ln() + ln_gamma_complex(z).im)
}

// B_{2k} / (2k (2k−1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const STIRLING_MIN_MODULUS: f64 = 15.0;

/// ln Γ(z) for Re z > 0: Stirling series, shifting z upward by the
/// recurrence when |z| is small. Principal logarithms of the shifted
/// factors keep the result on the branch continuous from the real axis.
pub(crate) fn ln_gamma_complex(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < STIRLING_MIN_MODULUS {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}
