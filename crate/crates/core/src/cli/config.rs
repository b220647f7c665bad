use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::ladder::{LadderConfig, DEFAULT_STEP};
use crate::quadrature::DEFAULT_MAX_PANELS;
use crate::rszeta::ZEvaluator;
use crate::verify::EquationId;

/// Environment variable naming the cache root.
pub const CACHE_ENV: &str = "ZLADDER_CACHE";
const DEFAULT_CACHE_DIR: &str = ".zladder-cache";

/// Complete description of a batch run. Every section has defaults, so an
/// empty document is a valid configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub evaluator: EvaluatorSection,
    pub ladder: LadderSection,
    pub quadrature: QuadratureSection,
    pub plan: PlanSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluatorSection {
    pub rs_correction_order: usize,
    pub oracle_terms: usize,
    pub t_min_rs: f64,
}

impl Default for EvaluatorSection {
    fn default() -> Self {
        let ev = ZEvaluator::default();
        Self {
            rs_correction_order: ev.rs_correction_order,
            oracle_terms: ev.oracle_terms,
            t_min_rs: ev.t_min_rs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LadderSection {
    pub t_lo: f64,
    pub t_hi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor_t0: Option<f64>,
    pub tolerance: f64,
    pub step: f64,
    /// Overrides the environment variable and the default directory.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
}

impl Default for LadderSection {
    fn default() -> Self {
        Self {
            t_lo: 1e3,
            t_hi: 1.1e5,
            anchor_t0: None,
            tolerance: 1e-8,
            step: DEFAULT_STEP,
            cache_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSection {
    pub max_panels: usize,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        Self {
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanSection {
    pub equations: Vec<EquationId>,
    /// Values of T, ascending.
    pub t_list: Vec<f64>,
    pub nu: Vec<f64>,
    pub n_max: usize,
    /// (α, β) pairs for the Jacobi equation.
    pub jacobi: Vec<[f64; 2]>,
    pub baseline_n_max: usize,
    pub baseline_tol: f64,
    pub exact_tol: f64,
    pub ratio_tol: f64,
    /// Also run the Z̃²-weighted versions of the Theorem 2 integrals.
    pub sanity: bool,
}

impl Default for PlanSection {
    fn default() -> Self {
        Self {
            equations: vec![EquationId::E1_2],
            t_list: vec![5e3, 1e4, 5e4],
            nu: vec![0.0, 1.0],
            n_max: 4,
            jacobi: vec![[0.5, -0.5]],
            baseline_n_max: 6,
            baseline_tol: 1e-9,
            exact_tol: 1e-4,
            ratio_tol: 0.25,
            sanity: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: Format,
    /// Standard output when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn evaluator(&self) -> Result<ZEvaluator, CliError> {
        let e = &self.evaluator;
        ZEvaluator::new(e.rs_correction_order, e.oracle_terms, e.t_min_rs).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn ladder_config(&self) -> LadderConfig {
        let l = &self.ladder;
        LadderConfig {
            anchor_t0: l.anchor_t0,
            step: l.step,
            ..LadderConfig::new(l.t_lo, l.t_hi, l.tolerance)
        }
    }

    /// Flag, then config file, then environment, then the default.
    pub fn cache_dir(&self) -> PathBuf {
        self.ladder
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.evaluator()?;
        self.ladder_config().validate().map_err(|e| CliError::Config(e.to_string()))?;
        let p = &self.plan;
        for (name, v) in [("baseline_tol", p.baseline_tol), ("exact_tol", p.exact_tol), ("ratio_tol", p.ratio_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("plan.{name} must be positive, got {v}")));
            }
        }
        if p.t_list.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(CliError::Config("plan.t_list must be strictly ascending".into()));
        }
        if self.quadrature.max_panels == 0 {
            return Err(CliError::Config("quadrature.max_panels must be at least 1".into()));
        }
        Ok(())
    }

    /// Checks that [T, T+U] lies in the value range of the ladder for every
    /// planned T, U being the longest interval any planned equation uses.
    pub fn check_plan_range(&self, range: (f64, f64)) -> Result<(), CliError> {
        let u = if self.plan.equations.iter().any(|e| *e >= EquationId::E2_5) { 2.0 } else { 1.0 };
        for &t in &self.plan.t_list {
            if !(t >= range.0 && t + u <= range.1) {
                return Err(CliError::Domain(format!(
                    "plan T = {t} needs [T, T+{u}] inside the ladder range [{}, {}]",
                    range.0, range.1
                )));
            }
        }
        Ok(())
    }
}
