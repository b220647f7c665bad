use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{domain, gamma_fn, SpecfunError};

pub const POLY_MAX_DEGREE: usize = 64;

/// A classical orthogonal family on [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PolyFamily {
    /// P_n^{(α,β)}, weight (1−u)^α (1+u)^β.
    Jacobi { alpha: f64, beta: f64 },
    /// P_n, weight 1.
    Legendre,
    /// T_n, weight 1/√(1−u²).
    ChebyshevT,
    /// U_n, weight √(1−u²).
    ChebyshevU,
}

impl PolyFamily {
    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self, SpecfunError> {
        let fam = PolyFamily::Jacobi { alpha, beta };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<(), SpecfunError> {
        if let PolyFamily::Jacobi { alpha, beta } = *self {
            if !(alpha > -1.0 && beta > -1.0 && alpha.is_finite() && beta.is_finite()) {
                return Err(domain("jacobi", format!("alpha = {alpha}, beta = {beta} (need > -1)")));
            }
        }
        Ok(())
    }

    /// Classical weight, given the distances `from_minus` = 1+u and
    /// `from_plus` = 1−u so the endpoint factors keep full precision.
    pub fn weight(&self, from_minus: f64, from_plus: f64) -> f64 {
        match *self {
            PolyFamily::Jacobi { alpha, beta } => from_plus.powf(alpha) * from_minus.powf(beta),
            PolyFamily::Legendre => 1.0,
            PolyFamily::ChebyshevT => 1.0 / (from_minus * from_plus).sqrt(),
            PolyFamily::ChebyshevU => (from_minus * from_plus).sqrt(),
        }
    }

    /// Whether the weight is unbounded or non-smooth at u = −1 / u = +1.
    pub fn singular_ends(&self) -> (bool, bool) {
        match *self {
            PolyFamily::Jacobi { alpha, beta } => (!is_nonneg_int(beta), !is_nonneg_int(alpha)),
            PolyFamily::Legendre => (false, false),
            PolyFamily::ChebyshevT | PolyFamily::ChebyshevU => (true, true),
        }
    }
}

fn is_nonneg_int(x: f64) -> bool {
    x >= 0.0 && x == x.floor()
}

fn check(n: usize, u: f64) -> Result<(), SpecfunError> {
    if n > POLY_MAX_DEGREE {
        return Err(domain("poly_eval", format!("degree {n} > {POLY_MAX_DEGREE}")));
    }
    if !(-1.0..=1.0).contains(&u) {
        return Err(domain("poly_eval", format!("u = {u} outside [-1, 1]")));
    }
    Ok(())
}

/// Evaluates the degree-n member of `family` at u by three-term recurrence.
pub fn poly_eval(family: PolyFamily, n: usize, u: f64) -> Result<f64, SpecfunError> {
    family.validate()?;
    check(n, u)?;
    Ok(match family {
        PolyFamily::Jacobi { alpha, beta } => jacobi(alpha, beta, n, u),
        PolyFamily::Legendre => legendre(n, u),
        PolyFamily::ChebyshevT => chebyshev(n, u, u),
        PolyFamily::ChebyshevU => chebyshev(n, u, 2.0 * u),
    })
}

fn jacobi(a: f64, b: f64, n: usize, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn legendre(n: usize, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn chebyshev(n: usize, x: f64, first: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = first;
    for _ in 2..=n {
        let p2 = 2.0 * x * p1 - p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// ∫_{−1}^{1} p_n(u)² w(u) du for the family's classical weight.
pub fn poly_norm_sq(family: PolyFamily, n: usize) -> Result<f64, SpecfunError> {
    family.validate()?;
    if n > POLY_MAX_DEGREE {
        return Err(domain("poly_norm_sq", format!("degree {n} > {POLY_MAX_DEGREE}")));
    }
    Ok(match family {
        PolyFamily::Jacobi { alpha, beta } => {
            let nf = n as f64;
            let lead = 2f64.powf(alpha + beta + 1.0);
            let num = gamma_fn(nf + alpha + 1.0)? * gamma_fn(nf + beta + 1.0)?;
            if n == 0 {
                // (α+β+1)Γ(α+β+1) = Γ(α+β+2), which stays finite at α+β = −1.
                lead * num / gamma_fn(alpha + beta + 2.0)?
            } else {
                lead / (2.0 * nf + alpha + beta + 1.0) * num / (gamma_fn(nf + 1.0)? * gamma_fn(nf + alpha + beta + 1.0)?)
            }
        }
        PolyFamily::Legendre => 2.0 / (2.0 * n as f64 + 1.0),
        PolyFamily::ChebyshevT => {
            if n == 0 {
                PI
            } else {
                0.5 * PI
            }
        }
        PolyFamily::ChebyshevU => 0.5 * PI,
    })
}
