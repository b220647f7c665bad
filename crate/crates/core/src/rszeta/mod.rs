//! Riemann–Siegel θ(t), the Hardy Z-function and |ζ(½+it)|².
//!
//! Two independent routes are provided. The fast route is the
//! Riemann–Siegel formula with remainder coefficients up to C₄ and the
//! asymptotic expansion of θ. The oracle route sums ζ(½+it) by
//! Euler–Maclaurin and takes θ from the Stirling series of ln Γ; it is
//! slower (cost grows linearly in t) but valid for every t > 0.

mod euler_maclaurin;
mod riemann_siegel;
mod theta;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use euler_maclaurin::{zeta_euler_maclaurin, MAX_CORRECTIONS};
pub use riemann_siegel::MAX_CORRECTION_ORDER;
pub use theta::{theta, theta_oracle};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaError {
    #[error("{what}: t = {t} is outside the domain")]
    Domain { what: &'static str, t: f64 },
    #[error("oracle lost precision at t = {t}: imaginary residue {imag:e}")]
    PrecisionFailure { t: f64, imag: f64 },
    #[error("invalid evaluator configuration: {0}")]
    Config(String),
}

/// Configured evaluator for θ, Z and |ζ(½+it)|². Immutable and `Sync`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZEvaluator {
    /// Highest Riemann–Siegel remainder coefficient C_k used (0..=4).
    pub rs_correction_order: usize,
    /// Number of Bernoulli correction terms in the Euler–Maclaurin oracle.
    pub oracle_terms: usize,
    /// Below this t only the oracle route is used.
    pub t_min_rs: f64,
}

impl Default for ZEvaluator {
    fn default() -> Self {
        Self {
            rs_correction_order: MAX_CORRECTION_ORDER,
            oracle_terms: 8,
            t_min_rs: 50.0,
        }
    }
}

impl ZEvaluator {
    pub fn new(rs_correction_order: usize, oracle_terms: usize, t_min_rs: f64) -> Result<Self, ZetaError> {
        let ev = Self {
            rs_correction_order,
            oracle_terms,
            t_min_rs,
        };
        ev.validate()?;
        Ok(ev)
    }

    pub fn validate(&self) -> Result<(), ZetaError> {
        if self.rs_correction_order > MAX_CORRECTION_ORDER {
            return Err(ZetaError::Config(format!(
                "rs_correction_order = {} (max {MAX_CORRECTION_ORDER})",
                self.rs_correction_order
            )));
        }
        if !(2..=MAX_CORRECTIONS).contains(&self.oracle_terms) {
            return Err(ZetaError::Config(format!(
                "oracle_terms = {} (need 2..={MAX_CORRECTIONS})",
                self.oracle_terms
            )));
        }
        if !(self.t_min_rs >= 1.0 && self.t_min_rs.is_finite()) {
            return Err(ZetaError::Config(format!("t_min_rs = {}", self.t_min_rs)));
        }
        Ok(())
    }

    /// Short stable digest of the configuration, recorded in caches and reports.
    pub fn config_hash(&self) -> String {
        let text = serde_json::to_string(self).expect("evaluator serialises");
        let digest = Sha256::digest(text.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn theta(&self, t: f64) -> Result<f64, ZetaError> {
        theta(t)
    }

    pub fn theta_oracle(&self, t: f64) -> Result<f64, ZetaError> {
        theta_oracle(t)
    }

    /// Z(t) by the Riemann–Siegel formula; requires t ≥ `t_min_rs`.
    pub fn z_rs(&self, t: f64) -> Result<f64, ZetaError> {
        if !(t >= self.t_min_rs && t.is_finite()) {
            return Err(ZetaError::Domain { what: "z_rs", t });
        }
        let th = theta(t)?;
        Ok(riemann_siegel::z_riemann_siegel(t, th, self.rs_correction_order))
    }

    /// ζ(½+it) by Euler–Maclaurin with cutoff max(10, ⌈2t⌉).
    pub fn zeta_oracle(&self, t: f64) -> Result<Complex64, ZetaError> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(ZetaError::Domain { what: "zeta_oracle", t });
        }
        let cutoff = (2.0 * t).ceil().max(10.0) as usize;
        Ok(zeta_euler_maclaurin(Complex64::new(0.5, t), cutoff, self.oracle_terms))
    }

    /// Z(t) = Re e^{iθ(t)} ζ(½+it) on the oracle route. The imaginary
    /// residue must stay below 1e−9·max(1, |ζ|).
    pub fn z_oracle(&self, t: f64) -> Result<f64, ZetaError> {
        let zeta = self.zeta_oracle(t)?;
        let th = theta_oracle(t)?;
        let w = Complex64::from_polar(1.0, th) * zeta;
        if w.im.abs() > 1e-9 * w.norm().max(1.0) {
            return Err(ZetaError::PrecisionFailure { t, imag: w.im });
        }
        Ok(w.re)
    }

    /// Z(t) on the best configured route.
    pub fn z(&self, t: f64) -> Result<f64, ZetaError> {
        if t >= self.t_min_rs {
            self.z_rs(t)
        } else {
            self.z_oracle(t)
        }
    }

    /// |ζ(½+it)|² = Z(t)², t ≥ 1.
    pub fn zeta_sq_mod(&self, t: f64) -> Result<f64, ZetaError> {
        if !(t >= 1.0) {
            return Err(ZetaError::Domain { what: "zeta_sq_mod", t });
        }
        let z = self.z(t)?;
        Ok(z * z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath.siegelz
    const Z_REFERENCE: &[(f64, f64)] = &[
        (100.0, 2.692_697_056_664_463_474_995_38),
        (500.0, 1.472_447_851_055_085_272_663_985),
        (1000.0, 0.997_794_637_521_586_613_986_002_7),
        (10_000.0, -0.341_394_724_231_208_559_176_890_4),
        (100_000.0, 5.879_592_468_681_765_041_546_472),
    ];

    #[test]
    fn oracle_matches_reference() {
        let ev = ZEvaluator::default();
        for &(t, want) in Z_REFERENCE {
            let got = ev.z_oracle(t).unwrap();
            assert!((got - want).abs() < 1e-9, "t = {t}: {got} vs {want}");
        }
    }

    #[test]
    fn riemann_siegel_matches_reference() {
        let ev = ZEvaluator::default();
        for &(t, want) in Z_REFERENCE {
            let got = ev.z_rs(t).unwrap();
            assert!((got - want).abs() < 1e-6, "t = {t}: {got} vs {want}");
        }
        // t = 1e6: mpmath gives −2.806133878430698
        let got = ev.z_rs(1e6).unwrap();
        assert!((got + 2.806_133_878_430_698).abs() < 1e-6);
    }

    #[test]
    fn accuracy_improves_with_correction_order() {
        let t = 200.0;
        let want = ZEvaluator::default().z_oracle(t).unwrap();
        let errs: Vec<f64> = (0..=4)
            .map(|k| {
                let ev = ZEvaluator::new(k, 8, 50.0).unwrap();
                (ev.z_rs(t).unwrap() - want).abs()
            })
            .collect();
        assert!(errs[4] < 1e-7, "{errs:?}");
        assert!(errs[0] > errs[2] && errs[2] > errs[4], "{errs:?}");
    }

    #[test]
    fn first_zeros_on_oracle_path() {
        let ev = ZEvaluator::default();
        assert!(ev.z_oracle(14.134_725).unwrap().abs() <= 1e-5);
        assert!(ev.z_oracle(21.022_040).unwrap().abs() <= 1e-5);
        assert!(ev.zeta_sq_mod(14.134_725_141_734_693).unwrap() <= 1e-10);
    }

    #[test]
    fn one_sign_change_between_14_and_14_2() {
        let ev = ZEvaluator::default();
        let mut changes = 0;
        let mut prev = ev.z(14.0).unwrap();
        for i in 1..=200 {
            let cur = ev.z(14.0 + 0.001 * i as f64).unwrap();
            if prev.signum() != cur.signum() {
                changes += 1;
            }
            prev = cur;
        }
        assert_eq!(changes, 1);
    }

    #[test]
    fn modulus_identity() {
        let ev = ZEvaluator::default();
        let zeta = ev.zeta_oracle(500.0).unwrap();
        let z = ev.z_oracle(500.0).unwrap();
        assert!((z * z / zeta.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rs_requires_threshold() {
        let ev = ZEvaluator::default();
        assert!(matches!(ev.z_rs(30.0), Err(ZetaError::Domain { .. })));
        assert!(ev.z(30.0).is_ok());
        assert!(ev.zeta_sq_mod(0.5).is_err());
    }

    #[test]
    fn config_validation_and_hash() {
        assert!(ZEvaluator::new(5, 8, 50.0).is_err());
        assert!(ZEvaluator::new(4, 1, 50.0).is_err());
        let a = ZEvaluator::default();
        let b = ZEvaluator::new(3, 8, 50.0).unwrap();
        assert_eq!(a.config_hash(), ZEvaluator::default().config_hash());
        assert_ne!(a.config_hash(), b.config_hash());
    }
}
