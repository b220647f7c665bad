use super::{domain, gamma_fn, SpecfunError};
use crate::sum::NeumaierSum;

/// Largest argument accepted by [`bessel_j`].
pub const BESSEL_X_MAX: f64 = 250.0;

// Below this the power series loses at most ~1e-13 to cancellation
// (the absolute series sums to I_ν(x) ≲ 430).
const SERIES_X_MAX: f64 = 8.0;

/// J_ν(x) for ν > −1 and 0 ≤ x ≤ 250.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    Ok(bessel_j_pair(nu, x)?.0)
}

/// (J_ν(x), J_{ν+1}(x)).
pub fn bessel_j_pair(nu: f64, x: f64) -> Result<(f64, f64), SpecfunError> {
    if !(nu > -1.0 && nu.is_finite()) {
        return Err(domain("bessel_j", format!("nu = {nu} (need nu > -1)")));
    }
    if !(0.0..=BESSEL_X_MAX).contains(&x) {
        return Err(domain("bessel_j", format!("x = {x} (need 0 <= x <= {BESSEL_X_MAX})")));
    }
    if x == 0.0 {
        return match nu {
            0.0 => Ok((1.0, 0.0)),
            v if v > 0.0 => Ok((0.0, 0.0)),
            _ => Err(domain("bessel_j", format!("J_{nu}(0) is infinite"))),
        };
    }
    if x <= SERIES_X_MAX {
        Ok((series(nu, x)?, series(nu + 1.0, x)?))
    } else {
        Ok(miller(nu, x))
    }
}

fn series(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half.powf(nu) / gamma_fn(nu + 1.0)?;
    let mut acc = NeumaierSum::new();
    acc.add(term);
    for r in 1..200 {
        let r = r as f64;
        term *= q / (r * (nu + r));
        acc.add(term);
        if term.abs() <= 1e-18 * acc.value().abs() && r > half {
            break;
        }
    }
    Ok(acc.value())
}

/// Backward recurrence J_{μ−1} = (2μ/x) J_μ − J_{μ+1} from a high order,
/// normalised with (x/2)^ν = Σ_k (ν+2k) Γ(ν+k)/k! · J_{ν+2k}(x).
fn miller(nu: f64, x: f64) -> (f64, f64) {
    let start = (x + 14.0 * x.cbrt() + 20.0).ceil() as usize;
    let m = start + start % 2;

    // g_k = Γ(ν+k) / (k! Γ(ν+1)), g_1 = 1.
    let mut g = vec![0.0; m / 2 + 1];
    if m >= 2 {
        g[1] = 1.0;
    }
    for k in 2..=m / 2 {
        g[k] = g[k - 1] * (nu + k as f64 - 1.0) / k as f64;
    }

    let mut f_next = 0.0; // f_{k+1}
    let mut f_cur = 1e-30; // f_k
    let mut norm = NeumaierSum::new();
    if m.is_multiple_of(2) && m >= 2 {
        norm.add((nu + m as f64) * g[m / 2] * f_cur);
    }
    for k in (1..=m).rev() {
        let f_prev = 2.0 * (nu + k as f64) / x * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        let order = k - 1;
        if order % 2 == 0 {
            let c = if order == 0 {
                1.0
            } else {
                (nu + order as f64) * g[order / 2]
            };
            norm.add(c * f_cur);
        }
        if f_cur.abs() > 1e250 {
            let s = 1e-250;
            f_cur *= s;
            f_next *= s;
            let v = norm.value() * s;
            norm = NeumaierSum::new();
            norm.add(v);
        }
    }
    // f_cur holds order 0 and f_next order 1.
    let lead = (0.5 * x).powf(nu) / gamma_fn(nu + 1.0).expect("nu > -1");
    let scale = lead / norm.value();
    (f_cur * scale, f_next * scale)
}

/// ½·J_{ν+1}(μ_n^{(ν)})², the norm-square of J_ν(μ_n x) under weight x on [0, 1].
pub fn bessel_norm_sq(nu: f64, n: usize) -> Result<f64, SpecfunError> {
    let mu = super::bessel_zero(nu, n)?;
    let j = bessel_j(nu + 1.0, mu)?;
    Ok(0.5 * j * j)
}
