use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use super::{bessel_j, bessel_j_pair, domain, SpecfunError, BESSEL_X_MAX};

/// Version tag of the persisted zero cache.
pub const ZERO_CACHE_VERSION: u32 = 1;

const MAX_ZERO_INDEX: usize = 64;
const RESIDUAL_LIMIT: f64 = 1e-12;
const SCAN_STEP: f64 = 0.2;

/// Positive zeros μ_1 < μ_2 < … of J_ν.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselZeroTable {
    pub nu: f64,
    pub zeros: Vec<f64>,
    /// max |J_ν(μ_n)| over the stored zeros.
    pub residual_bound: f64,
}

impl BesselZeroTable {
    pub fn new(nu: f64) -> Result<Self, SpecfunError> {
        if !(nu > -1.0 && nu.is_finite()) {
            return Err(domain("bessel_zero", format!("nu = {nu}")));
        }
        Ok(Self {
            nu,
            zeros: Vec::new(),
            residual_bound: 0.0,
        })
    }

    /// Extends the table until it holds at least `count` zeros.
    pub fn extend_to(&mut self, count: usize) -> Result<(), SpecfunError> {
        while self.zeros.len() < count {
            let n = self.zeros.len() + 1;
            let z = find_zero(self.nu, n, self.zeros.last().copied())?;
            let r = bessel_j(self.nu, z)?.abs();
            self.residual_bound = self.residual_bound.max(r);
            self.zeros.push(z);
        }
        Ok(())
    }

    pub fn zero(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.zeros.get(i).copied())
    }

    /// Checks ordering and residuals of a table read from disk.
    fn validate(&self) -> Result<(), SpecfunError> {
        if self.zeros.windows(2).any(|w| !(w[0] < w[1])) || self.zeros.first().is_some_and(|z| *z <= 0.0) {
            return Err(SpecfunError::Cache(format!("zeros for nu = {} are not increasing", self.nu)));
        }
        for z in &self.zeros {
            let r = bessel_j(self.nu, *z)?.abs();
            if r > RESIDUAL_LIMIT {
                return Err(SpecfunError::Cache(format!(
                    "stored zero {z} for nu = {} has residual {r:e}",
                    self.nu
                )));
            }
        }
        Ok(())
    }
}

/// McMahon's large-zero expansion.
fn mcmahon(nu: f64, n: usize) -> f64 {
    let mu = 4.0 * nu * nu;
    let beta = (n as f64 + 0.5 * nu - 0.25) * PI;
    let b8 = 8.0 * beta;
    beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
}

fn find_zero(nu: f64, n: usize, previous: Option<f64>) -> Result<f64, SpecfunError> {
    let fail = |detail: String| SpecfunError::Convergence { nu, n, detail };
    // Consecutive zeros are more than 2 apart for ν > −1, and J_ν > 0 on (0, ν].
    let mut lo = match previous {
        Some(z) => z + 1.0,
        None => nu.max(1e-3),
    };
    let mut f_lo = bessel_j(nu, lo)?;
    let mut hi = lo;
    loop {
        let next = (hi + SCAN_STEP).min(BESSEL_X_MAX);
        let f_next = bessel_j(nu, next)?;
        if f_next == 0.0 {
            return Ok(next);
        }
        if f_lo.signum() != f_next.signum() {
            hi = next;
            break;
        }
        if next >= BESSEL_X_MAX {
            return Err(fail("no sign change below the argument limit".into()));
        }
        lo = next;
        f_lo = f_next;
        hi = next;
    }

    // Safeguarded Newton inside [lo, hi], started from McMahon when it lies in the bracket.
    let guess = mcmahon(nu, n);
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..100 {
        let (j, j1) = bessel_j_pair(nu, x)?;
        if j == 0.0 {
            return Ok(x);
        }
        if j.signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let dj = nu / x * j - j1;
        let step = j / dj;
        let mut next = x - step;
        if !(next > lo && next < hi) || !step.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * x {
            let r = bessel_j(nu, next)?.abs();
            if r > RESIDUAL_LIMIT {
                return Err(fail(format!("residual {r:e} at {next}")));
            }
            return Ok(next);
        }
        x = next;
    }
    Err(fail("Newton iteration did not settle".into()))
}

/// Append-only cache of zero tables keyed by ν.
#[derive(Debug, Default)]
pub struct BesselZeroCache {
    tables: RwLock<BTreeMap<u64, BesselZeroTable>>,
}

#[derive(Serialize, Deserialize)]
struct CacheDocument {
    version: u32,
    tables: BTreeMap<String, StoredTable>,
}

#[derive(Serialize, Deserialize)]
struct StoredTable {
    zeros: Vec<f64>,
    residual_bound: f64,
}

fn key(nu: f64) -> u64 {
    // +0.0 and -0.0 share a table.
    (nu + 0.0).to_bits()
}

impl BesselZeroCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The n-th positive zero of J_ν (n ≥ 1).
    pub fn zero(&self, nu: f64, n: usize) -> Result<f64, SpecfunError> {
        if n == 0 || n > MAX_ZERO_INDEX {
            return Err(domain("bessel_zero", format!("n = {n} (need 1 <= n <= {MAX_ZERO_INDEX})")));
        }
        if let Some(z) = self.tables.read().expect("zero cache poisoned").get(&key(nu)).and_then(|t| t.zero(n)) {
            return Ok(z);
        }
        let mut tables = self.tables.write().expect("zero cache poisoned");
        let table = match tables.entry(key(nu)) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(BesselZeroTable::new(nu)?),
        };
        table.extend_to(n)?;
        Ok(table.zero(n).expect("table extended"))
    }

    /// Snapshot of the table for ν, if any zeros were computed.
    pub fn table(&self, nu: f64) -> Option<BesselZeroTable> {
        self.tables.read().expect("zero cache poisoned").get(&key(nu)).cloned()
    }

    pub fn to_json(&self) -> String {
        let tables = self.tables.read().expect("zero cache poisoned");
        let doc = CacheDocument {
            version: ZERO_CACHE_VERSION,
            tables: tables
                .values()
                .map(|t| {
                    (
                        format!("{}", t.nu),
                        StoredTable {
                            zeros: t.zeros.clone(),
                            residual_bound: t.residual_bound,
                        },
                    )
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("zero cache serialises")
    }

    /// Loads a cache document, re-checking every stored zero.
    pub fn from_json(text: &str) -> Result<Self, SpecfunError> {
        let doc: CacheDocument =
            serde_json::from_str(text).map_err(|e| SpecfunError::Cache(format!("parse error: {e}")))?;
        if doc.version != ZERO_CACHE_VERSION {
            return Err(SpecfunError::Cache(format!(
                "version {} (expected {ZERO_CACHE_VERSION})",
                doc.version
            )));
        }
        let mut tables = BTreeMap::new();
        for (nu_text, stored) in doc.tables {
            let nu: f64 = nu_text
                .parse()
                .map_err(|_| SpecfunError::Cache(format!("bad nu key {nu_text:?}")))?;
            let table = BesselZeroTable {
                nu,
                zeros: stored.zeros,
                residual_bound: stored.residual_bound,
            };
            table.validate()?;
            tables.insert(key(nu), table);
        }
        Ok(Self {
            tables: RwLock::new(tables),
        })
    }
}

fn global() -> &'static BesselZeroCache {
    static CACHE: OnceLock<BesselZeroCache> = OnceLock::new();
    CACHE.get_or_init(BesselZeroCache::new)
}

/// The n-th positive zero μ_n^{(ν)} of J_ν, served from a process-wide cache.
pub fn bessel_zero(nu: f64, n: usize) -> Result<f64, SpecfunError> {
    global().zero(nu, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath.besseljzero
    const REFERENCE: &[(f64, usize, f64)] = &[
        (0.0, 1, 2.404_825_557_695_772_768_6),
        (0.0, 2, 5.520_078_110_286_310_649_6),
        (0.0, 3, 8.653_727_912_911_012_217),
        (0.0, 10, 30.634_606_468_431_975_118),
        (0.0, 64, 200.277_155_793_332_411_78),
        (0.5, 10, 31.415_926_535_897_932_385),
        (1.0, 1, 3.831_705_970_207_512_315_6),
        (1.0, 2, 7.015_586_669_815_618_753_5),
        (2.0, 3, 11.619_841_172_149_059_427),
        (10.0, 1, 14.475_500_686_554_541_238),
        (10.0, 10, 45.231_574_103_535_044_854),
        (10.0, 64, 215.753_289_306_129_700_91),
    ];

    #[test]
    fn matches_reference_zeros() {
        let cache = BesselZeroCache::new();
        for &(nu, n, want) in REFERENCE {
            let z = cache.zero(nu, n).unwrap();
            assert!((z - want).abs() < 1e-11 * want, "j({nu},{n}) = {z}, want {want}");
            assert!(bessel_j(nu, z).unwrap().abs() <= RESIDUAL_LIMIT);
        }
        assert!(cache.table(0.0).unwrap().residual_bound <= RESIDUAL_LIMIT);
    }

    #[test]
    fn half_order_zeros_are_multiples_of_pi() {
        for n in 1..=20 {
            let z = bessel_zero(0.5, n).unwrap();
            assert!((z - n as f64 * PI).abs() < 1e-12 * z);
        }
    }

    #[test]
    fn interlacing() {
        for &nu in &[0.0, 0.5, 1.0, 2.0] {
            for n in 1..=10 {
                let a = bessel_zero(nu, n).unwrap();
                let b = bessel_zero(nu + 1.0, n).unwrap();
                let c = bessel_zero(nu, n + 1).unwrap();
                assert!(a < b && b < c, "nu = {nu}, n = {n}");
            }
        }
    }

    #[test]
    fn negative_order_first_zero() {
        // J_{-1/2}(x) = sqrt(2/(πx)) cos x.
        let z = bessel_zero(-0.5, 1).unwrap();
        assert!((z - 0.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn index_limits() {
        assert!(bessel_zero(0.0, 0).is_err());
        assert!(bessel_zero(0.0, 65).is_err());
        assert!(bessel_zero(-1.0, 1).is_err());
    }

    #[test]
    fn json_round_trip_and_corruption() {
        let cache = BesselZeroCache::new();
        cache.zero(0.5, 5).unwrap();
        cache.zero(1.0, 3).unwrap();
        let text = cache.to_json();
        let back = BesselZeroCache::from_json(&text).unwrap();
        assert_eq!(back.table(0.5), cache.table(0.5));
        assert_eq!(back.to_json(), text);

        let tampered = text.replacen("3.14159", "3.24159", 1);
        assert!(matches!(BesselZeroCache::from_json(&tampered), Err(SpecfunError::Cache(_))));
        let wrong_version = text.replacen("\"version\": 1", "\"version\": 9", 1);
        assert!(matches!(BesselZeroCache::from_json(&wrong_version), Err(SpecfunError::Cache(_))));
    }
}
