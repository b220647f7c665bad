use std::f64::consts::PI;

use super::SpecfunError;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// Γ(x) overflows f64 just above this.
const GAMMA_X_MAX: f64 = 171.624_376_956_302_7;

/// Γ(x) for real x (Lanczos, reflection below ½).
pub fn gamma_fn(x: f64) -> Result<f64, SpecfunError> {
    if !x.is_finite() {
        return Err(super::domain("gamma", format!("x = {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(SpecfunError::Pole(x));
    }
    if x > GAMMA_X_MAX {
        return Err(SpecfunError::Overflow(x));
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        let g = gamma_fn(1.0 - x)?;
        return Ok(PI / (s * g));
    }
    // Exact factorials keep integer arguments exact.
    if x == x.floor() && x <= 23.0 {
        let mut f = 1.0;
        for k in 2..(x as u64) {
            f *= k as f64;
        }
        return Ok(f);
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z+½) e^(-t), split so that neither factor overflows near x = 171.
    let half = t.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * half * (half * (-t).exp()) * a)
}
