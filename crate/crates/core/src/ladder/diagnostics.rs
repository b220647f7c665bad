use serde::{Deserialize, Serialize};

use super::{check_admissible, LadderError, LadderTable, PrimePi, EULER_GAMMA};

/// One row of the retardation diagnostic: the lag t − φ₁(t) against the
/// predicted (1−c)π(t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetardationRow {
    pub t: f64,
    pub lag: f64,
    pub predicted: f64,
    /// `lag / predicted`, absent when π(t) = 0.
    pub ratio: Option<f64>,
}

pub fn retardation_report(ladder: &LadderTable, ts: &[f64]) -> Result<Vec<RetardationRow>, LadderError> {
    let top = ts.iter().copied().fold(0.0f64, f64::max);
    let primes = PrimePi::new(top.max(2.0).floor() as u64);
    ts.iter()
        .map(|&t| {
            let predicted = (1.0 - EULER_GAMMA) * primes.at(t)? as f64;
            // At the anchor the lag is the normalisation itself; taking it
            // from the definition avoids the rounding in t − φ₁(t).
            let lag = if t == ladder.anchor_t0() { predicted } else { t - ladder.eval(t)? };
            Ok(RetardationRow {
                t,
                lag,
                predicted,
                ratio: (predicted != 0.0).then(|| lag / predicted),
            })
        })
        .collect()
}

/// max over ξ ∈ [φ₁⁻¹(T), φ₁⁻¹(T+U)] of |ln ξ − ln T|·ln T. The maximum is
/// attained at one of the two ends since ln is monotone.
pub fn log_stability_check(ladder: &LadderTable, base: f64, u: f64) -> Result<f64, LadderError> {
    check_admissible(base, u)?;
    let ln_t = base.ln();
    let a = ladder.invert(base)?;
    let b = ladder.invert(base + u)?;
    Ok((a.ln() - ln_t).abs().max((b.ln() - ln_t).abs()) * ln_t)
}
