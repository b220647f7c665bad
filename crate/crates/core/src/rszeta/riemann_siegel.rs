//! Riemann–Siegel main sum and remainder coefficients C₀…C₄.
//!
//! The remainder coefficients are combinations of derivatives of
//! Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp). Ψ is entire (the zeros of the
//! denominator at p = ¼ + k/2 are cancelled by the numerator), so its
//! derivatives are taken once by Cauchy's integral formula on a circle
//! in the complex plane, away from the removable points, and each C_k is
//! stored as a Chebyshev series on p ∈ [0, 1].

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Highest supported remainder coefficient index.
pub const MAX_CORRECTION_ORDER: usize = 4;

const CHEB_NODES: usize = 64;
const CAUCHY_POINTS: usize = 128;
const CAUCHY_RADIUS: f64 = 1.0;
const MAX_DERIV: usize = 12;

fn psi(z: Complex64) -> Complex64 {
    let two_pi = 2.0 * PI;
    (two_pi * (z * z - z - 1.0 / 16.0)).cos() / (two_pi * z).cos()
}

/// Ψ^{(m)}(p) for m = 0..=12.
pub(crate) fn psi_derivatives(p: f64) -> [f64; MAX_DERIV + 1] {
    let mut acc = [Complex64::new(0.0, 0.0); MAX_DERIV + 1];
    for k in 0..CAUCHY_POINTS {
        // Half-step offset keeps every node off the real axis.
        let phi = 2.0 * PI * (k as f64 + 0.5) / CAUCHY_POINTS as f64;
        let e = Complex64::from_polar(1.0, phi);
        let val = psi(p + CAUCHY_RADIUS * e);
        let mut rot = Complex64::new(1.0, 0.0);
        let step = e.conj();
        for a in acc.iter_mut() {
            *a += val * rot;
            rot *= step;
        }
    }
    let mut out = [0.0; MAX_DERIV + 1];
    let mut fact = 1.0;
    for (m, a) in acc.iter().enumerate() {
        if m > 0 {
            fact *= m as f64;
        }
        out[m] = fact * a.re / (CAUCHY_POINTS as f64 * CAUCHY_RADIUS.powi(m as i32));
    }
    out
}

/// C₀(p)…C₄(p) from the derivatives of Ψ.
pub(crate) fn correction_terms_direct(p: f64) -> [f64; MAX_CORRECTION_ORDER + 1] {
    let d = psi_derivatives(p);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let pi8 = pi4 * pi4;
    [
        d[0],
        -d[3] / (96.0 * pi2),
        d[2] / (64.0 * pi2) + d[6] / (18_432.0 * pi4),
        -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5_308_416.0 * pi6),
        d[0] / (128.0 * pi2)
            + 19.0 * d[4] / (24_576.0 * pi4)
            + 11.0 * d[8] / (5_898_240.0 * pi6)
            + d[12] / (2_038_431_744.0 * pi8),
    ]
}

struct Chebyshev {
    coeffs: [f64; CHEB_NODES],
}

impl Chebyshev {
    /// Clenshaw evaluation at p ∈ [0, 1].
    fn eval(&self, p: f64) -> f64 {
        let x = 2.0 * p - 1.0;
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + 0.5 * self.coeffs[0]
    }
}

fn tables() -> &'static [Chebyshev; MAX_CORRECTION_ORDER + 1] {
    static TABLES: OnceLock<[Chebyshev; MAX_CORRECTION_ORDER + 1]> = OnceLock::new();
    TABLES.get_or_init(|| {
        let n = CHEB_NODES;
        let samples: Vec<[f64; MAX_CORRECTION_ORDER + 1]> = (0..n)
            .map(|j| {
                let x = (PI * (j as f64 + 0.5) / n as f64).cos();
                correction_terms_direct(0.5 * (x + 1.0))
            })
            .collect();
        std::array::from_fn(|order| {
            let mut coeffs = [0.0; CHEB_NODES];
            for (i, c) in coeffs.iter_mut().enumerate() {
                let mut s = 0.0;
                for (j, row) in samples.iter().enumerate() {
                    s += row[order] * (PI * i as f64 * (j as f64 + 0.5) / n as f64).cos();
                }
                *c = 2.0 * s / n as f64;
            }
            Chebyshev { coeffs }
        })
    })
}

/// C_k(p) from the precomputed Chebyshev tables.
pub(crate) fn correction_term(order: usize, p: f64) -> f64 {
    tables()[order].eval(p)
}

fn log_table() -> &'static [(f64, f64)] {
    static LOGS: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    LOGS.get_or_init(|| {
        (0..=LOG_TABLE_LEN)
            .map(|n| {
                if n == 0 {
                    (0.0, 0.0)
                } else {
                    let nf = n as f64;
                    (nf.ln(), 1.0 / nf.sqrt())
                }
            })
            .collect()
    })
}

// Covers the main sum up to t ≈ 1.05e8.
const LOG_TABLE_LEN: usize = 4096;

/// Riemann–Siegel value of Z(t) given θ(t); `order` is the highest C_k used.
pub(crate) fn z_riemann_siegel(t: f64, theta: f64, order: usize) -> f64 {
    let a = (t / (2.0 * PI)).sqrt();
    let n_main = a.floor() as usize;
    let p = a - n_main as f64;
    let logs = log_table();
    let mut main = 0.0;
    #[allow(clippy::needless_range_loop)]
    for n in 1..=n_main {
        let (ln_n, inv_sqrt) = if n <= LOG_TABLE_LEN {
            logs[n]
        } else {
            let nf = n as f64;
            (nf.ln(), 1.0 / nf.sqrt())
        };
        main += inv_sqrt * (theta - t * ln_n).cos();
    }
    let inv_a = 1.0 / a;
    let mut rem = 0.0;
    let mut scale = 1.0;
    for k in 0..=order.min(MAX_CORRECTION_ORDER) {
        rem += correction_term(k, p) * scale;
        scale *= inv_a;
    }
    let sign = if n_main % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * main + sign * inv_a.sqrt() * rem
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c0_matches_closed_form_away_from_removable_points() {
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            let c = (2.0 * PI * p).cos();
            if c.abs() < 1e-3 {
                continue;
            }
            let direct = (2.0 * PI * (p * p - p - 1.0 / 16.0)).cos() / c;
            assert!((correction_term(0, p) - direct).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn c0_is_smooth_through_removable_points() {
        // Central differences across p = ¼ stay bounded.
        let h = 1e-4;
        let f = |p: f64| correction_term(0, p);
        let d = (f(0.25 + h) - f(0.25 - h)) / (2.0 * h);
        let d2 = (f(0.25 + 2.0 * h) - f(0.25)) / (2.0 * h);
        assert!((d - d2).abs() < 1e-2);
    }

    #[test]
    fn chebyshev_tables_match_direct_derivatives() {
        for i in 0..37 {
            let p = (i as f64 + 0.3) / 37.0;
            let direct = correction_terms_direct(p);
            for (k, want) in direct.iter().enumerate() {
                let got = correction_term(k, p);
                assert!((got - want).abs() < 1e-12, "C{k}({p}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn known_c1_value_at_half() {
        // Ψ is even about p = ½, so the odd derivatives there vanish.
        let d = psi_derivatives(0.5);
        assert!(d[1].abs() < 1e-12 && d[3].abs() < 1e-10);
        // Ψ(½) = cos(2π·5/16)/(−1)
        assert!((d[0] + (2.0 * PI * 5.0 / 16.0).cos()).abs() < 1e-13);
    }
}
