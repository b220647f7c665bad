use serde::{Deserialize, Serialize};

use super::theorem1::{quad_tol, theorem1_entry, Weighting};
use super::{EquationId, Layer, Trap, VerificationReport, VerifyError};
use crate::ladder::{LadderTable, LocalChart};
use crate::quadrature::{EndpointFlags, QuadratureResult};
use crate::specfun::{bessel_norm_sq, poly_eval, poly_norm_sq, PolyFamily};

const MAX_DEGREE: usize = 16;

/// One integral equation of the Theorem 2 family, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "eq")]
#[allow(non_camel_case_types)]
pub enum Theorem2Case {
    /// Bessel square, U = 1.
    E2_4 { nu: f64, n: usize },
    /// Jacobi, weight (1−u)^α(1+u)^β.
    E2_5 { alpha: f64, beta: f64, n: usize },
    /// Legendre.
    E2_6 { n: usize },
    /// Chebyshev first kind, weight 1/√(1−u²).
    E2_7 { n: usize },
    /// 1/√(1−u²) alone.
    E2_8,
    /// Chebyshev second kind, weight √(1−u²).
    E2_9 { n: usize },
    /// √(1−u²) alone.
    E2_10,
}

impl Theorem2Case {
    pub fn id(&self) -> EquationId {
        match self {
            Theorem2Case::E2_4 { .. } => EquationId::E2_4,
            Theorem2Case::E2_5 { .. } => EquationId::E2_5,
            Theorem2Case::E2_6 { .. } => EquationId::E2_6,
            Theorem2Case::E2_7 { .. } => EquationId::E2_7,
            Theorem2Case::E2_8 => EquationId::E2_8,
            Theorem2Case::E2_9 { .. } => EquationId::E2_9,
            Theorem2Case::E2_10 => EquationId::E2_10,
        }
    }

    /// Builds the case for `id` from the generic parameters; `alpha`/`beta`
    /// are read only for Jacobi and `nu` only for the Bessel case.
    pub fn from_id(id: EquationId, n: usize, nu: f64, alpha: f64, beta: f64) -> Result<Self, VerifyError> {
        let case = match id {
            EquationId::E2_4 => Theorem2Case::E2_4 { nu, n },
            EquationId::E2_5 => Theorem2Case::E2_5 { alpha, beta, n },
            EquationId::E2_6 => Theorem2Case::E2_6 { n },
            EquationId::E2_7 => Theorem2Case::E2_7 { n },
            EquationId::E2_8 => Theorem2Case::E2_8,
            EquationId::E2_9 => Theorem2Case::E2_9 { n },
            EquationId::E2_10 => Theorem2Case::E2_10,
            other => return Err(VerifyError::Request(format!("{other} is not a Theorem 2 equation"))),
        };
        case.validate()?;
        Ok(case)
    }

    /// Length U of the x-interval [T, T+U].
    pub fn length(&self) -> f64 {
        match self {
            Theorem2Case::E2_4 { .. } => 1.0,
            _ => 2.0,
        }
    }

    /// Polynomial family and degree, for the cases on [−1, 1].
    fn poly(&self) -> Option<(PolyFamily, usize)> {
        match *self {
            Theorem2Case::E2_4 { .. } => None,
            Theorem2Case::E2_5 { alpha, beta, n } => Some((PolyFamily::Jacobi { alpha, beta }, n)),
            Theorem2Case::E2_6 { n } => Some((PolyFamily::Legendre, n)),
            Theorem2Case::E2_7 { n } => Some((PolyFamily::ChebyshevT, n)),
            Theorem2Case::E2_8 => Some((PolyFamily::ChebyshevT, 0)),
            Theorem2Case::E2_9 { n } => Some((PolyFamily::ChebyshevU, n)),
            Theorem2Case::E2_10 => Some((PolyFamily::ChebyshevU, 0)),
        }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        let n = match *self {
            Theorem2Case::E2_4 { nu, n } => {
                if !(nu >= 0.0 && nu.is_finite()) {
                    return Err(VerifyError::Request(format!("E2_4 needs nu >= 0, got {nu}")));
                }
                Some(n)
            }
            Theorem2Case::E2_5 { n, .. } | Theorem2Case::E2_6 { n } | Theorem2Case::E2_7 { n } | Theorem2Case::E2_9 { n } => {
                Some(n)
            }
            Theorem2Case::E2_8 | Theorem2Case::E2_10 => None,
        };
        if let Some(n) = n {
            if n == 0 || n > MAX_DEGREE {
                return Err(VerifyError::Request(format!("{}: n = {n} outside 1..={MAX_DEGREE}", self.id())));
            }
        }
        if let Some((fam, _)) = self.poly() {
            fam.validate()?;
        }
        Ok(())
    }

    /// ∫ of the x-side integrand over [T, T+U]: the constant multiplying ln T.
    pub fn norm(&self) -> Result<f64, VerifyError> {
        Ok(match (self, self.poly()) {
            (Theorem2Case::E2_4 { nu, n }, _) => bessel_norm_sq(*nu, *n)?,
            (_, Some((fam, n))) => poly_norm_sq(fam, n)?,
            _ => unreachable!("every case is Bessel or polynomial"),
        })
    }

    fn singular(&self) -> EndpointFlags {
        match self.poly() {
            Some((fam, _)) => {
                let (left, right) = fam.singular_ends();
                EndpointFlags { left, right }
            }
            None => EndpointFlags::NONE,
        }
    }

    fn describe(&self, r: VerificationReport) -> VerificationReport {
        let r = r.param("U", self.length());
        match *self {
            Theorem2Case::E2_4 { nu, n } => r.param("nu", nu).param("n", n as f64),
            Theorem2Case::E2_5 { alpha, beta, n } => r.param("alpha", alpha).param("beta", beta).param("n", n as f64),
            Theorem2Case::E2_6 { n } | Theorem2Case::E2_7 { n } | Theorem2Case::E2_9 { n } => r.param("n", n as f64),
            Theorem2Case::E2_8 | Theorem2Case::E2_10 => r,
        }
    }
}

/// Left-hand side of `case` on the chart over [φ₁⁻¹(T), φ₁⁻¹(T+U)] with
/// x(t) = φ₁(t) and u = x(t) − T − 1.
pub fn theorem2_lhs(
    chart: &LocalChart<'_>,
    case: &Theorem2Case,
    weighting: Weighting,
    quad_tol: f64,
) -> Result<QuadratureResult, VerifyError> {
    case.validate()?;
    if (chart.length() - case.length()).abs() > 0.0 {
        return Err(VerifyError::Request(format!(
            "{} needs a chart of length {}, got {}",
            case.id(),
            case.length(),
            chart.length()
        )));
    }
    let Some((fam, n)) = case.poly() else {
        let Theorem2Case::E2_4 { nu, n } = *case else { unreachable!() };
        return theorem1_entry(chart, nu, n, n, weighting, quad_tol);
    };
    let mut trap = Trap::default();
    let res = chart.integrate(
        |p| {
            // 1 + u = x and 1 − u = x_rev, each exact near its own end
            let u = if p.x <= p.x_rev { p.x - 1.0 } else { 1.0 - p.x_rev };
            let q = trap.catch(poly_eval(fam, n, u));
            q * q * fam.weight(p.x, p.x_rev) * weighting.at(p)
        },
        case.singular(),
        quad_tol,
    );
    trap.check()?;
    Ok(res?)
}

fn run(ladder: &LadderTable, base: f64, case: &Theorem2Case, weighting: Weighting, rhs: f64, tol: f64) -> Result<(QuadratureResult, VerificationReport), VerifyError> {
    let chart = LocalChart::new(ladder, base, case.length())?;
    let res = theorem2_lhs(&chart, case, weighting, quad_tol(tol * rhs.abs()))?;
    let layer = match weighting {
        Weighting::ZTilde => Layer::Exact,
        Weighting::ZetaSq => Layer::Asymptotic,
    };
    let r = VerificationReport::new(case.id(), layer, res.value, rhs)
        .param("T", base)
        .quad(res.error_estimate)
        .hashes(ladder);
    Ok((res, case.describe(r)))
}

/// |ζ|²-weighted integral with x(t) = φ₁(t) against norm·ln T.
pub fn verify_theorem2(ladder: &LadderTable, base: f64, case: &Theorem2Case, tol_ratio: f64) -> Result<VerificationReport, VerifyError> {
    let rhs = case.norm()? * base.ln();
    let (_, r) = run(ladder, base, case, Weighting::ZetaSq, rhs, 1e-6)?;
    let passed = r.ratio_error() <= tol_ratio;
    Ok(r.judged(tol_ratio, passed))
}

/// The same integral with weight Z̃²; by the change of variables it equals
/// the norm exactly.
pub fn sanity_theorem2_exact(ladder: &LadderTable, base: f64, case: &Theorem2Case, tol: f64) -> Result<VerificationReport, VerifyError> {
    let rhs = case.norm()?;
    let (_, r) = run(ladder, base, case, Weighting::ZTilde, rhs, tol)?;
    let passed = r.ratio_error() <= tol;
    Ok(r.judged(tol, passed))
}

/// Largest change of the ratio when ln T on the right-hand side is replaced
/// by ln ξ, ξ ranging over the t-interval of the report.
pub fn ln_t_placement_shift(ladder: &LadderTable, report: &VerificationReport) -> Result<f64, VerifyError> {
    let (Some(&base), Some(&u), Some(ratio)) = (report.params.get("T"), report.params.get("U"), report.ratio) else {
        return Err(VerifyError::Request("report lacks T, U or a ratio".into()));
    };
    let ln_t = base.ln();
    let ends = [ladder.invert(base)?, ladder.invert(base + u)?];
    Ok(ends.iter().map(|xi| (ratio * (ln_t / xi.ln() - 1.0)).abs()).fold(0.0, f64::max))
}
