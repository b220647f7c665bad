use serde::{Deserialize, Serialize};

use super::{EquationId, Layer, Trap, VerificationReport, VerifyError};
use crate::ladder::{ChartPoint, LadderTable, LocalChart};
use crate::quadrature::{EndpointFlags, QuadratureResult};
use crate::specfun::{bessel_j, bessel_norm_sq, bessel_zero};

/// Weight multiplying the transported integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// Z̃²(t) = Z²/ln t: the exact change-of-variables weight.
    ZTilde,
    /// |ζ(½+it)|²: the weight of the asymptotic equations.
    ZetaSq,
}

impl Weighting {
    pub(crate) fn at(self, p: &ChartPoint) -> f64 {
        match self {
            Weighting::ZTilde => p.density,
            Weighting::ZetaSq => p.density * p.t.ln(),
        }
    }
}

pub(crate) fn quad_tol(tol: f64) -> f64 {
    (tol * 1e-3).max(1e-13)
}

fn check_order(nu: f64, max_n: usize) -> Result<(), VerifyError> {
    if !(nu >= 0.0 && nu.is_finite()) || max_n == 0 || max_n > 64 {
        return Err(VerifyError::Request(format!("need nu >= 0 and 1 <= n <= 64 (got nu = {nu}, n = {max_n})")));
    }
    Ok(())
}

/// ∫ J_ν[μ_m x(t)] J_ν[μ_n x(t)] x(t) w(t) dt over the chart, with
/// x(t) = φ₁(t) − T.
pub fn theorem1_entry(
    chart: &LocalChart<'_>,
    nu: f64,
    m: usize,
    n: usize,
    weighting: Weighting,
    quad_tol: f64,
) -> Result<QuadratureResult, VerifyError> {
    let (mm, mn) = (bessel_zero(nu, m)?, bessel_zero(nu, n)?);
    let mut trap = Trap::default();
    let res = chart.integrate(
        |p| {
            let jm = trap.catch(bessel_j(nu, mm * p.x));
            let jn = if m == n { jm } else { trap.catch(bessel_j(nu, mn * p.x)) };
            jm * jn * p.x * weighting.at(p)
        },
        EndpointFlags::NONE,
        quad_tol,
    );
    trap.check()?;
    Ok(res?)
}

/// Z̃²-weighted orthogonality of J_ν[μ_n(φ₁(t) − T)] on [φ₁⁻¹(T), φ₁⁻¹(T+1)]
/// for 1 ≤ m ≤ n ≤ `max_n`, followed by the segment-distance row.
pub fn verify_theorem1(
    ladder: &LadderTable,
    base: f64,
    nu: f64,
    max_n: usize,
    tol: f64,
) -> Result<Vec<VerificationReport>, VerifyError> {
    check_order(nu, max_n)?;
    let chart = LocalChart::new(ladder, base, 1.0)?;
    let mut out = Vec::new();
    for m in 1..=max_n {
        for n in m..=max_n {
            let res = theorem1_entry(&chart, nu, m, n, Weighting::ZTilde, quad_tol(tol))?;
            let (id, rhs) = if m == n {
                (EquationId::E1_3_diag, bessel_norm_sq(nu, n)?)
            } else {
                (EquationId::E1_3_offdiag, 0.0)
            };
            let r = VerificationReport::new(id, Layer::Exact, res.value, rhs)
                .param("T", base)
                .param("nu", nu)
                .param("m", m as f64)
                .param("n", n as f64)
                .quad(res.error_estimate)
                .hashes(ladder);
            let passed = r.abs_error <= tol * (1.0 + rhs);
            out.push(r.judged(tol, passed));
        }
    }
    out.push(distance_report(ladder, base, 0.1)?);
    Ok(out)
}

/// Distance between [0, 1] and [φ₁⁻¹(T), φ₁⁻¹(T+1)], compared with T.
pub fn distance_report(ladder: &LadderTable, base: f64, tol_ratio: f64) -> Result<VerificationReport, VerifyError> {
    let a = ladder.invert(base)?;
    let r = VerificationReport::new(EquationId::E1_4, Layer::Asymptotic, a - 1.0, base)
        .param("T", base)
        .hashes(ladder);
    let passed = r.ratio_error() <= tol_ratio;
    Ok(r.judged(tol_ratio, passed))
}

/// |ζ|²-weighted diagonal integral against ½J_{ν+1}(μ_n)²·ln T, one report
/// per T.
pub fn verify_corollary(
    ladder: &LadderTable,
    bases: &[f64],
    nu: f64,
    n: usize,
    tol_ratio: f64,
) -> Result<Vec<VerificationReport>, VerifyError> {
    check_order(nu, n)?;
    bases
        .iter()
        .map(|&base| {
            let chart = LocalChart::new(ladder, base, 1.0)?;
            let norm = bessel_norm_sq(nu, n)?;
            let res = theorem1_entry(&chart, nu, n, n, Weighting::ZetaSq, quad_tol(norm * base.ln() * 1e-6))?;
            let r = VerificationReport::new(EquationId::E2_2, Layer::Asymptotic, res.value, norm * base.ln())
                .param("T", base)
                .param("U", 1.0)
                .param("nu", nu)
                .param("n", n as f64)
                .quad(res.error_estimate)
                .hashes(ladder);
            let passed = r.ratio_error() <= tol_ratio;
            Ok(r.judged(tol_ratio, passed))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRow {
    pub t: f64,
    /// |J_ν[μ_n(φ₁(t) − T)]|·√(φ₁(t) − T)
    pub envelope: f64,
    pub abs_z: f64,
}

/// The modulated oscillation |J_ν[μ_n x(t)]|√x(t) and |Z(t)| on a grid in
/// [φ₁⁻¹(T), φ₁⁻¹(T+1)]. With `points` ≥ 2 the grid is uniform and
/// includes both ends.
pub fn envelope_23(
    ladder: &LadderTable,
    base: f64,
    nu: f64,
    n: usize,
    points: usize,
) -> Result<Vec<EnvelopeRow>, VerifyError> {
    check_order(nu, n)?;
    if points < 2 {
        return Err(VerifyError::Request("envelope needs at least 2 grid points".into()));
    }
    let chart = LocalChart::new(ladder, base, 1.0)?;
    let mu = bessel_zero(nu, n)?;
    let (a, b) = (chart.a(), chart.b());
    let ev = ladder.evaluator();
    (0..points)
        .map(|i| {
            let t = if i + 1 == points { b } else { a + (b - a) * i as f64 / (points - 1) as f64 };
            let x = if i == 0 { 0.0 } else { chart.offset(t)? };
            Ok(EnvelopeRow {
                t,
                envelope: bessel_j(nu, mu * x)?.abs() * x.sqrt(),
                abs_z: ev.z(t).map_err(crate::ladder::LadderError::from)?.abs(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::{build_ladder, LadderConfig};
    use crate::rszeta::ZEvaluator;
    use std::sync::OnceLock;

    fn ladder() -> &'static LadderTable {
        static L: OnceLock<LadderTable> = OnceLock::new();
        L.get_or_init(|| build_ladder(&ZEvaluator::default(), &LadderConfig::new(1000.0, 1100.0, 1e-9)).unwrap())
    }

    #[test]
    fn orthogonality_at_small_t() {
        let reps = verify_theorem1(ladder(), 950.0, 0.0, 3, 1e-6).unwrap();
        assert_eq!(reps.len(), 7);
        for r in &reps[..6] {
            assert!(r.passed, "{r:?}");
        }
        assert_eq!(reps[6].equation_id, EquationId::E1_4);
        assert!(reps[6].ratio.unwrap() > 1.0);
    }

    #[test]
    fn symmetric_in_m_and_n() {
        let chart = LocalChart::new(ladder(), 960.0, 1.0).unwrap();
        let a = theorem1_entry(&chart, 1.0, 2, 4, Weighting::ZTilde, 1e-12).unwrap().value;
        let b = theorem1_entry(&chart, 1.0, 4, 2, Weighting::ZTilde, 1e-12).unwrap().value;
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn corollary_ratio_is_near_one() {
        let reps = verify_corollary(ladder(), &[950.0, 990.0], 0.0, 1, 0.3).unwrap();
        for r in reps {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn envelope_bounds() {
        let rows = envelope_23(ladder(), 950.0, 0.0, 3, 200).unwrap();
        assert_eq!(rows.len(), 200);
        assert_eq!(rows[0].envelope, 0.0);
        let mu = bessel_zero(0.0, 3).unwrap();
        let bound = (0..=20_000)
            .map(|i| {
                let x = i as f64 / 20_000.0;
                bessel_j(0.0, mu * x).unwrap().abs() * x.sqrt()
            })
            .fold(0.0, f64::max);
        assert!(rows.iter().all(|r| r.envelope <= bound + 1e-6 && r.abs_z >= 0.0));
    }
}
