use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ztilde_sq, LadderError, PrimePi, EULER_GAMMA};
use crate::quadrature::{gauss7, gauss_kronrod_15};
use crate::rszeta::ZEvaluator;
use crate::sum::NeumaierSum;

pub const DEFAULT_STEP: f64 = 0.05;
/// Rule used to accumulate each checkpoint panel.
pub const PANEL_RULE: &str = "gauss_kronrod_15";
const DEFAULT_MAX_REFINEMENT: u32 = 10;
const INVERT_TOL: f64 = 1e-11;
// Z(t) carries absolute rounding noise of about Z_NOISE·ε·t·ln t from
// its phase arguments; |K − G| below the induced level cannot be reduced
// by bisection.
const Z_NOISE: f64 = 4.0;

/// Parameters of a ladder build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    pub t_lo: f64,
    pub t_hi: f64,
    /// Defaults to `t_lo + 10`.
    pub anchor_t0: Option<f64>,
    pub tolerance: f64,
    pub step: f64,
    /// Maximal bisection depth inside one checkpoint panel.
    pub max_refinement: u32,
}

impl LadderConfig {
    pub fn new(t_lo: f64, t_hi: f64, tolerance: f64) -> Self {
        Self {
            t_lo,
            t_hi,
            anchor_t0: None,
            tolerance,
            step: DEFAULT_STEP,
            max_refinement: DEFAULT_MAX_REFINEMENT,
        }
    }

    pub fn with_anchor(mut self, anchor_t0: f64) -> Self {
        self.anchor_t0 = Some(anchor_t0);
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn anchor(&self) -> f64 {
        self.anchor_t0.unwrap_or((self.t_lo + 10.0).min(self.t_hi))
    }

    pub fn validate(&self) -> Result<(), LadderError> {
        let bad = |m: String| Err(LadderError::Config(m));
        let e1 = std::f64::consts::E + 1.0;
        if !(self.t_lo.is_finite() && self.t_hi.is_finite() && self.t_lo >= e1 && self.t_lo < self.t_hi) {
            return bad(format!("domain [{}, {}] (need e+1 <= t_lo < t_hi)", self.t_lo, self.t_hi));
        }
        if self.t_hi - self.t_lo > 1e6 {
            return bad(format!("domain length {} exceeds 1e6", self.t_hi - self.t_lo));
        }
        let a = self.anchor();
        if !(a >= self.t_lo && a <= self.t_hi) {
            return bad(format!("anchor {a} outside [{}, {}]", self.t_lo, self.t_hi));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad(format!("tolerance {}", self.tolerance));
        }
        if !(self.step > 0.0 && self.step <= DEFAULT_STEP) {
            return bad(format!("step {} (need 0 < step <= {DEFAULT_STEP})", self.step));
        }
        Ok(())
    }

    /// Digest of this configuration together with the evaluator settings.
    pub fn config_hash(&self, ev: &ZEvaluator) -> String {
        let text = serde_json::to_string(&(self, ev, PANEL_RULE)).expect("config serialises");
        let digest = Sha256::digest(text.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Checkpointed φ₁ over [t_lo, t_hi]. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTable {
    pub(crate) evaluator: ZEvaluator,
    pub(crate) config: LadderConfig,
    pub(crate) anchor_value: f64,
    pub(crate) phi: Vec<f64>,
}

/// Builds φ₁ on `[cfg.t_lo, cfg.t_hi]` from φ₁(t₀) = t₀ − (1−c)π(t₀) and
/// dφ₁/dt = Z̃²(t).
pub fn build_ladder(ev: &ZEvaluator, cfg: &LadderConfig) -> Result<LadderTable, LadderError> {
    cfg.validate()?;
    ev.validate()?;
    let anchor = cfg.anchor();
    let primes = PrimePi::new(anchor.floor() as u64);
    let anchor_value = anchor - (1.0 - EULER_GAMMA) * primes.at(anchor)? as f64;

    let mut table = LadderTable {
        evaluator: *ev,
        config: cfg.clone(),
        anchor_value,
        phi: Vec::new(),
    };
    let n_panels = table.panel_count();
    let span = cfg.t_hi - cfg.t_lo;
    let integrals = (0..n_panels)
        .map(|k| {
            let (a, b) = (table.checkpoint_t(k), table.checkpoint_t(k + 1));
            integrate_panel(ev, a, b, cfg.tolerance * (b - a) / span, cfg.max_refinement)
        })
        .collect::<Result<Vec<f64>, _>>()?;

    let k_a = table.locate(anchor);
    let t_ka = table.checkpoint_t(k_a);
    let head = if anchor > t_ka {
        integrate_panel(ev, t_ka, anchor, cfg.tolerance * (anchor - t_ka) / span, cfg.max_refinement)?
    } else {
        0.0
    };

    let mut phi = vec![0.0; n_panels + 1];
    let mut fwd = NeumaierSum::new();
    fwd.add(anchor_value);
    fwd.add(-head);
    phi[k_a] = fwd.value();
    let mut bwd = fwd;
    for k in k_a..n_panels {
        fwd.add(integrals[k]);
        phi[k + 1] = fwd.value().max(phi[k]);
    }
    for k in (0..k_a).rev() {
        bwd.add(-integrals[k]);
        phi[k] = bwd.value().min(phi[k + 1]);
    }
    table.phi = phi;
    Ok(table)
}

/// ∫_a^b Z̃² by 15-point Kronrod with the embedded 7-point Gauss value as
/// the refinement check; bisects until the two agree to `tol`.
pub(crate) fn integrate_panel(ev: &ZEvaluator, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64, LadderError> {
    let mut failure = None;
    let est = gauss_kronrod_15(
        |t| match ztilde_sq(ev, t) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        a,
        b,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let diff = (est.kronrod - est.gauss).abs();
    if diff <= tol || diff <= noise_floor(a, b, est.abs_integral) {
        return Ok(est.kronrod);
    }
    if depth == 0 {
        return Err(LadderError::TolNotMet { a, b, error: diff });
    }
    let mid = 0.5 * (a + b);
    Ok(integrate_panel(ev, a, mid, 0.5 * tol, depth - 1)? + integrate_panel(ev, mid, b, 0.5 * tol, depth - 1)?)
}

/// Rounding level of a Z̃² panel integral over [a, b] with ∫|Z̃²| = `abs`.
fn noise_floor(a: f64, b: f64, abs: f64) -> f64 {
    let (len, ln_t) = (b - a, b.ln());
    let dz = Z_NOISE * f64::EPSILON * b * ln_t;
    let z_mean = (abs / len * ln_t).sqrt();
    len * (2.0 * z_mean * dz + dz * dz) / ln_t + 100.0 * f64::EPSILON * abs
}

/// 7-point Gauss value of ∫ Z̃² over [start, start + len].
pub(crate) fn local_integral(ev: &ZEvaluator, start: f64, len: f64) -> Result<f64, LadderError> {
    if len == 0.0 {
        return Ok(0.0);
    }
    let mut failure = None;
    let v = gauss7(
        |s| match ztilde_sq(ev, start + s) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        len,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

impl LadderTable {
    pub fn t_lo(&self) -> f64 {
        self.config.t_lo
    }
    pub fn t_hi(&self) -> f64 {
        self.config.t_hi
    }
    pub fn anchor_t0(&self) -> f64 {
        self.config.anchor()
    }
    pub fn anchor_value(&self) -> f64 {
        self.anchor_value
    }
    pub fn step(&self) -> f64 {
        self.config.step
    }
    pub fn build_tolerance(&self) -> f64 {
        self.config.tolerance
    }
    pub fn panel_rule(&self) -> &'static str {
        PANEL_RULE
    }
    pub fn evaluator(&self) -> &ZEvaluator {
        &self.evaluator
    }
    pub fn config(&self) -> &LadderConfig {
        &self.config
    }
    pub fn config_hash(&self) -> String {
        self.config.config_hash(&self.evaluator)
    }

    pub(crate) fn panel_count(&self) -> usize {
        let span = self.config.t_hi - self.config.t_lo;
        let mut n = (span / self.config.step).ceil().max(1.0) as usize;
        // drop a sliver panel produced by rounding
        while n > 1 && self.config.t_lo + (n - 1) as f64 * self.config.step >= self.config.t_hi {
            n -= 1;
        }
        n
    }

    pub fn checkpoint_count(&self) -> usize {
        self.phi.len()
    }

    pub fn checkpoint_t(&self, k: usize) -> f64 {
        let n = self.panel_count();
        if k >= n {
            self.config.t_hi
        } else {
            self.config.t_lo + k as f64 * self.config.step
        }
    }

    /// Checkpoint values φ₁(t_k).
    pub fn checkpoint_values(&self) -> &[f64] {
        &self.phi
    }

    pub fn checkpoints(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.phi.iter().enumerate().map(|(k, &v)| (self.checkpoint_t(k), v))
    }

    /// Panel index k with t_k ≤ t < t_{k+1} (the last panel also takes t_hi).
    pub(crate) fn locate(&self, t: f64) -> usize {
        let n = self.panel_count();
        let mut k = (((t - self.config.t_lo) / self.config.step).floor().max(0.0) as usize).min(n - 1);
        while k > 0 && self.checkpoint_t(k) > t {
            k -= 1;
        }
        while k + 1 < n && self.checkpoint_t(k + 1) <= t {
            k += 1;
        }
        k
    }

    fn check_domain(&self, what: &'static str, t: f64) -> Result<(), LadderError> {
        if !(t >= self.config.t_lo && t <= self.config.t_hi) {
            return Err(LadderError::Domain {
                what,
                value: t,
                lo: self.config.t_lo,
                hi: self.config.t_hi,
            });
        }
        Ok(())
    }

    /// φ₁(t) for t ∈ [t_lo, t_hi].
    pub fn eval(&self, t: f64) -> Result<f64, LadderError> {
        self.check_domain("ladder_eval", t)?;
        let k = self.locate(t);
        let tk = self.checkpoint_t(k);
        if t == tk {
            return Ok(self.phi[k]);
        }
        if t == self.checkpoint_t(k + 1) {
            return Ok(self.phi[k + 1]);
        }
        let inc = local_integral(&self.evaluator, tk, t - tk)?;
        Ok((self.phi[k] + inc).clamp(self.phi[k], self.phi[k + 1]))
    }

    /// Z̃²(t) = dφ₁/dt.
    pub fn density(&self, t: f64) -> Result<f64, LadderError> {
        ztilde_sq(&self.evaluator, t)
    }

    /// Value range [φ₁(t_lo), φ₁(t_hi)].
    pub fn range(&self) -> (f64, f64) {
        (self.phi[0], *self.phi.last().expect("non-empty ladder"))
    }

    /// Smallest t with φ₁(t) = y.
    pub fn invert(&self, y: f64) -> Result<f64, LadderError> {
        let (lo, hi) = self.range();
        if !(y >= lo && y <= hi) {
            return Err(LadderError::Domain {
                what: "ladder_invert",
                value: y,
                lo,
                hi,
            });
        }
        let j = self.phi.partition_point(|&v| v < y);
        if self.phi[j] == y {
            return Ok(self.checkpoint_t(j));
        }
        // φ_{j−1} < y < φ_j
        let k = j - 1;
        let tk = self.checkpoint_t(k);
        let width = self.checkpoint_t(k + 1) - tk;
        let target = y - self.phi[k];
        // Solve ∫_{t_k}^{t_k+s} Z̃² = target for s.
        let (mut s_lo, mut s_hi) = (0.0, width);
        let mut s = width * (target / (self.phi[k + 1] - self.phi[k])).clamp(0.0, 1.0);
        for _ in 0..200 {
            let g = local_integral(&self.evaluator, tk, s)? - target;
            if g.abs() <= INVERT_TOL {
                return Ok(tk + s);
            }
            if g < 0.0 {
                s_lo = s;
            } else {
                s_hi = s;
            }
            let d = self.density(tk + s)?;
            let mut next = s - g / d;
            if !(next > s_lo && next < s_hi) || !next.is_finite() {
                next = 0.5 * (s_lo + s_hi);
            }
            if s_hi - s_lo <= 4.0 * f64::EPSILON * (tk + s) {
                return Ok(tk + next);
            }
            s = next;
        }
        Ok(tk + s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::OnceLock;

    fn small() -> &'static LadderTable {
        static L: OnceLock<LadderTable> = OnceLock::new();
        L.get_or_init(|| build_ladder(&ZEvaluator::default(), &LadderConfig::new(1000.0, 1200.0, 1e-9)).unwrap())
    }

    #[test]
    fn anchor_value_and_exact_checkpoints() {
        let l = small();
        assert_eq!(l.anchor_t0(), 1010.0);
        // π(1010) = 169
        assert_eq!(l.anchor_value(), 1010.0 - (1.0 - EULER_GAMMA) * 169.0);
        assert_eq!(l.eval(1010.0).unwrap(), l.anchor_value());
        for k in [0, 17, 200, l.checkpoint_count() - 1] {
            let (t, v) = (l.checkpoint_t(k), l.checkpoint_values()[k]);
            assert_eq!(l.eval(t).unwrap(), v);
        }
        assert_eq!(l.checkpoint_t(l.checkpoint_count() - 1), 1200.0);
    }

    #[test]
    fn increments_match_independent_quadrature() {
        let l = small();
        let ev = ZEvaluator::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = rng.gen_range(1000.0..1190.0);
            let b = a + rng.gen_range(0.1..10.0);
            let direct = integrate_adaptive(|t| ev.zeta_sq_mod(t).unwrap() / t.ln(), a, b, 1e-11).unwrap();
            let inc = l.eval(b).unwrap() - l.eval(a).unwrap();
            assert!((inc - direct.value).abs() < 1e-9, "{inc} vs {}", direct.value);
        }
    }

    #[test]
    fn anchor_relative_values_match_direct_integral() {
        let l = small();
        let ev = ZEvaluator::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let t = rng.gen_range(1000.0..1200.0);
            let (a, b, sign) = if t >= 1010.0 { (1010.0, t, 1.0) } else { (t, 1010.0, -1.0) };
            let direct = integrate_adaptive(|u| ev.zeta_sq_mod(u).unwrap() / u.ln(), a, b, 1e-11).unwrap();
            let want = l.anchor_value() + sign * direct.value;
            assert!((l.eval(t).unwrap() - want).abs() < 1e-9);
        }
    }

    #[test]
    fn monotone_on_random_pairs() {
        let l = small();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let a = rng.gen_range(1000.0..1200.0);
            let b = if rng.gen_bool(0.3) { (a + rng.gen_range(0.0..1e-6f64)).min(1200.0) } else { rng.gen_range(a..=1200.0) };
            assert!(l.eval(a).unwrap() <= l.eval(b).unwrap(), "{a} {b}");
        }
        assert!(l.checkpoint_values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn inversion_round_trip() {
        let l = small();
        let (lo, hi) = l.range();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let y = rng.gen_range(lo..hi);
            let t = l.invert(y).unwrap();
            assert!((l.eval(t).unwrap() - y).abs() <= 1e-10);
        }
        assert_eq!(l.invert(l.anchor_value()).unwrap(), 1010.0);
        assert!(l.invert(hi + 1.0).is_err());
        assert!(l.eval(999.0).is_err());
    }

    #[test]
    fn halving_the_step_changes_little() {
        let ev = ZEvaluator::default();
        let cfg = LadderConfig::new(2000.0, 2100.0, 1e-8);
        let coarse = build_ladder(&ev, &cfg).unwrap();
        let fine = build_ladder(&ev, &cfg.clone().with_step(0.025)).unwrap();
        let d = (coarse.range().1 - fine.range().1).abs();
        assert!(d <= 1e-8, "{d}");
    }

    #[test]
    fn config_validation() {
        let ev = ZEvaluator::default();
        assert!(build_ladder(&ev, &LadderConfig::new(3.0, 100.0, 1e-8)).is_err());
        assert!(build_ladder(&ev, &LadderConfig::new(100.0, 50.0, 1e-8)).is_err());
        assert!(build_ladder(&ev, &LadderConfig::new(100.0, 200.0, 1e-8).with_anchor(300.0)).is_err());
        assert!(build_ladder(&ev, &LadderConfig::new(100.0, 200.0, 1e-8).with_step(0.1)).is_err());
        assert!(build_ladder(&ev, &LadderConfig::new(100.0, 2e6, 1e-8)).is_err());
    }
}
