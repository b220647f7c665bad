//! Command-line front end.
//!
//! Settings come from a TOML [`RunConfig`]; command-line flags override it.
//! The ladder is cached per configuration hash under the cache root
//! (`--cache-dir`, `ladder.cache_dir`, `$ZLADDER_CACHE`, `.zladder-cache`,
//! in that order).
//!
//! Exit codes: 0 success, 1 exact-layer failure, 2 asymptotic-layer failure
//! only, 64 bad configuration or out-of-domain request, 65 corrupt or
//! mismatched cache, 70 numeric non-convergence, 74 I/O failure.

mod config;
mod output;
mod plan;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::ladder::{retardation_report, LadderCache, LadderError, LadderTable};
use crate::quadrature::{with_panel_budget, QuadError};
use crate::rszeta::ZetaError;
use crate::specfun::{BesselZeroCache, SpecfunError};
use crate::verify::{
    sanity_theorem2_exact, verify_bessel_baseline, verify_corollary, verify_theorem1, verify_theorem2, envelope_23,
    EquationId, Layer, Theorem2Case, VerificationReport, VerifyError,
};

pub use config::{
    EvaluatorSection, Format, LadderSection, OutputSection, PlanSection, QuadratureSection, RunConfig, CACHE_ENV,
};
pub use output::{reports_to_csv, summarize};
pub use plan::{execute_plan, needs_ladder};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("out of domain: {0}")]
    Domain(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Domain(_) => 64,
            CliError::Cache(_) => 65,
            CliError::NonConvergence(_) => 70,
            CliError::Io(_) => 74,
        }
    }
}

impl From<LadderError> for CliError {
    fn from(e: LadderError) -> Self {
        match e {
            LadderError::Domain { .. } | LadderError::Admissibility { .. } | LadderError::Config(_) => {
                CliError::Domain(e.to_string())
            }
            LadderError::Cache(_) | LadderError::CacheMismatch { .. } => CliError::Cache(e.to_string()),
            LadderError::TolNotMet { .. } => CliError::NonConvergence(e.to_string()),
            LadderError::Zeta(z) => z.into(),
            LadderError::Quad(q) => q.into(),
            LadderError::Io(io) => CliError::Io(io),
        }
    }
}

impl From<ZetaError> for CliError {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::Domain { .. } => CliError::Domain(e.to_string()),
            ZetaError::Config(_) => CliError::Config(e.to_string()),
            ZetaError::PrecisionFailure { .. } => CliError::NonConvergence(e.to_string()),
        }
    }
}

impl From<QuadError> for CliError {
    fn from(e: QuadError) -> Self {
        match e {
            QuadError::InvalidInterval { .. } | QuadError::InvalidTolerance(_) => CliError::Domain(e.to_string()),
            QuadError::NonConvergence { .. } | QuadError::NonFinite { .. } => CliError::NonConvergence(e.to_string()),
        }
    }
}

impl From<SpecfunError> for CliError {
    fn from(e: SpecfunError) -> Self {
        match e {
            SpecfunError::Cache(_) => CliError::Cache(e.to_string()),
            SpecfunError::Convergence { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Ladder(l) => l.into(),
            VerifyError::Specfun(s) => s.into(),
            VerifyError::Quad(q) => q.into(),
            VerifyError::Request(m) => CliError::Config(m),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "zladder", version, about = "Jacob's ladders from the Hardy Z-function and their integral checks")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cache root (overrides the config file and $ZLADDER_CACHE).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Record wall-clock time per report (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// Highest Riemann–Siegel correction term (0..=4)
    #[arg(long, global = true)]
    pub rs_order: Option<usize>,
    /// Euler–Maclaurin correction depth of the oracle
    #[arg(long, global = true)]
    pub oracle_terms: Option<usize>,
    /// Lower end of the ladder domain
    #[arg(long, global = true)]
    pub t_lo: Option<f64>,
    /// Upper end of the ladder domain
    #[arg(long, global = true)]
    pub t_hi: Option<f64>,
    /// Anchor t₀ of the ladder
    #[arg(long, global = true)]
    pub anchor: Option<f64>,
    /// Absolute tolerance of the ladder build
    #[arg(long, global = true)]
    pub ladder_tol: Option<f64>,
    /// Panel budget for adaptive quadrature
    #[arg(long, global = true)]
    pub max_panels: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hardy Z-function.
    #[command(subcommand)]
    Z(ZCommand),
    /// Special functions.
    #[command(subcommand)]
    Specfun(SpecfunCommand),
    /// Build and query the ladder.
    #[command(subcommand)]
    Ladder(LadderCommand),
    /// Single verification jobs.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// CSV tables for plotting.
    PlotData(PlotArgs),
    /// Summarise a JSON Lines report file.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
    /// Execute the plan of the run configuration.
    Run,
}

#[derive(Debug, Subcommand)]
pub enum ZCommand {
    /// Print t, θ(t), Z(t).
    Eval {
        #[arg(long, num_args = 1.., required = true)]
        t: Vec<f64>,
        /// Use the Euler–Maclaurin route instead of Riemann–Siegel.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpecfunCommand {
    /// First `count` positive zeros of J_ν (persisted in the cache root).
    Zeros {
        #[arg(long)]
        nu: f64,
        #[arg(long)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum LadderCommand {
    /// Build (or load) the ladder and print its cache path.
    Build,
    Query {
        #[arg(long, num_args = 1.., required = true)]
        t: Vec<f64>,
    },
    Invert {
        #[arg(long, num_args = 1.., required = true)]
        y: Vec<f64>,
    },
    Retardation {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    Baseline {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    Theorem1 {
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    Corollary {
        #[arg(long = "T", num_args = 1.., required = true)]
        t: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        tol_ratio: f64,
    },
    Theorem2 {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = 0.25)]
        tol_ratio: f64,
    },
    Sanity {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    #[arg(long = "T")]
    pub t: f64,
    /// One of E2_4 … E2_10.
    #[arg(long)]
    pub eq: EquationId,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
}

impl CaseArgs {
    fn case(&self) -> Result<Theorem2Case, CliError> {
        Ok(Theorem2Case::from_id(self.eq, self.n, self.nu, self.alpha, self.beta)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum PlotKind {
    Envelope,
    Ladder,
    Retardation,
    ZTrace,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub what: PlotKind,
    /// T for the envelope.
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
}

/// Parses the process arguments, runs the command and maps the outcome to
/// an exit code. Errors are reported on standard error.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("zladder: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Resolves the effective configuration: file, then flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let o = &cli.overrides;
    if let Some(v) = o.rs_order {
        cfg.evaluator.rs_correction_order = v;
    }
    if let Some(v) = o.oracle_terms {
        cfg.evaluator.oracle_terms = v;
    }
    if let Some(v) = o.t_lo {
        cfg.ladder.t_lo = v;
    }
    if let Some(v) = o.t_hi {
        cfg.ladder.t_hi = v;
    }
    if let Some(v) = o.anchor {
        cfg.ladder.anchor_t0 = Some(v);
    }
    if let Some(v) = o.ladder_tol {
        cfg.ladder.tolerance = v;
    }
    if let Some(v) = o.max_panels {
        cfg.quadrature.max_panels = v;
    }
    if let Some(d) = &cli.cache_dir {
        cfg.ladder.cache_dir = Some(d.clone());
    }
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    if let Some(p) = &cli.out {
        cfg.output.path = Some(p.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_ladder(cfg: &RunConfig) -> Result<LadderTable, CliError> {
    let cache = LadderCache::new(cfg.cache_dir());
    let (table, reused) = cache.load_or_build(&cfg.evaluator()?, &cfg.ladder_config())?;
    eprintln!(
        "zladder: ladder {} ({})",
        cache.path_for(table.evaluator(), table.config()).display(),
        if reused { "reused" } else { "built" }
    );
    Ok(table)
}

struct Sink {
    inner: Box<dyn Write>,
}

impl Sink {
    fn open(cfg: &RunConfig) -> Result<Self, CliError> {
        let inner: Box<dyn Write> = match &cfg.output.path {
            Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
            None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
        };
        Ok(Self { inner })
    }

    fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.inner, "{s}")?;
        Ok(())
    }

    fn reports(&mut self, cfg: &RunConfig, reps: &[VerificationReport]) -> Result<(), CliError> {
        match cfg.output.format {
            Format::Json => crate::verify::write_json_lines(&mut self.inner, reps)?,
            Format::Csv => self.inner.write_all(reports_to_csv(reps).as_bytes())?,
        }
        self.inner.flush()?;
        Ok(())
    }
}

/// 0 when all checks pass, 1 on any exact-layer failure, 2 when only
/// asymptotic checks fail.
pub fn status_of(reps: &[VerificationReport]) -> u8 {
    if reps.iter().any(|r| !r.passed && r.layer == Layer::Exact) {
        1
    } else if reps.iter().any(|r| !r.passed) {
        2
    } else {
        0
    }
}

pub(crate) fn timed<F>(timings: bool, job: F) -> Result<Vec<VerificationReport>, CliError>
where
    F: FnOnce() -> Result<Vec<VerificationReport>, VerifyError>,
{
    let start = std::time::Instant::now();
    let mut reps = job()?;
    if timings {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        reps.iter_mut().for_each(|r| r.elapsed_ms = Some(ms));
    }
    Ok(reps)
}

fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0 && from <= to && from.is_finite() && to.is_finite()) {
        return Err(CliError::Config(format!("bad grid from {from} to {to} step {step}")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| from + k as f64 * step).collect())
}

pub fn execute(cli: &Cli) -> Result<u8, CliError> {
    let cfg = resolve_config(cli)?;
    with_panel_budget(cfg.quadrature.max_panels, || dispatch(cli, &cfg))
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<u8, CliError> {
    let mut sink = Sink::open(cfg)?;
    match &cli.command {
        Command::Z(ZCommand::Eval { t, oracle }) => {
            let ev = cfg.evaluator()?;
            sink.line("t,theta,z")?;
            for &t in t {
                let (theta, z) = if *oracle {
                    (ev.theta_oracle(t)?, ev.z_oracle(t)?)
                } else {
                    (ev.theta(t)?, ev.z(t)?)
                };
                sink.line(&format!("{t:?},{theta:?},{z:?}"))?;
            }
        }
        Command::Specfun(SpecfunCommand::Zeros { nu, count }) => {
            let dir = cfg.cache_dir();
            let path = dir.join("bessel-zeros.json");
            let cache = match std::fs::read_to_string(&path) {
                Ok(text) => BesselZeroCache::from_json(&text)?,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => BesselZeroCache::new(),
                Err(e) => return Err(e.into()),
            };
            sink.line("n,zero")?;
            for n in 1..=*count {
                sink.line(&format!("{n},{:?}", cache.zero(*nu, n)?))?;
            }
            std::fs::create_dir_all(&dir)?;
            let tmp = path.with_extension("json.tmp");
            std::fs::write(&tmp, cache.to_json())?;
            std::fs::rename(&tmp, &path)?;
        }
        Command::Ladder(cmd) => {
            let l = load_ladder(cfg)?;
            match cmd {
                LadderCommand::Build => {
                    let (lo, hi) = l.range();
                    sink.line(&format!(
                        "{}",
                        serde_json::json!({
                            "config_hash": l.config_hash(),
                            "t_lo": l.t_lo(), "t_hi": l.t_hi(),
                            "anchor_t0": l.anchor_t0(), "anchor_value": l.anchor_value(),
                            "phi_lo": lo, "phi_hi": hi,
                            "checkpoints": l.checkpoint_count(),
                        })
                    ))?;
                }
                LadderCommand::Query { t } => {
                    sink.line("t,phi1")?;
                    for &t in t {
                        sink.line(&format!("{t:?},{:?}", l.eval(t)?))?;
                    }
                }
                LadderCommand::Invert { y } => {
                    sink.line("y,t")?;
                    for &y in y {
                        sink.line(&format!("{y:?},{:?}", l.invert(y)?))?;
                    }
                }
                LadderCommand::Retardation { from, to, step } => {
                    write_retardation(&mut sink, &l, &grid(*from, *to, *step)?)?;
                }
            }
        }
        Command::Verify(cmd) => {
            let reps = match cmd {
                VerifyCommand::Baseline { nu, max_n, tol } => timed(cli.timings, || verify_bessel_baseline(*nu, *max_n, *tol))?,
                VerifyCommand::Theorem1 { t, nu, max_n, tol } => {
                    let l = load_ladder(cfg)?;
                    timed(cli.timings, || verify_theorem1(&l, *t, *nu, *max_n, *tol))?
                }
                VerifyCommand::Corollary { t, nu, n, tol_ratio } => {
                    let l = load_ladder(cfg)?;
                    timed(cli.timings, || verify_corollary(&l, t, *nu, *n, *tol_ratio))?
                }
                VerifyCommand::Theorem2 { case, tol_ratio } => {
                    let c = case.case()?;
                    let l = load_ladder(cfg)?;
                    timed(cli.timings, || Ok(vec![verify_theorem2(&l, case.t, &c, *tol_ratio)?]))?
                }
                VerifyCommand::Sanity { case, tol } => {
                    let c = case.case()?;
                    let l = load_ladder(cfg)?;
                    timed(cli.timings, || Ok(vec![sanity_theorem2_exact(&l, case.t, &c, *tol)?]))?
                }
            };
            sink.reports(cfg, &reps)?;
            return Ok(status_of(&reps));
        }
        Command::PlotData(args) => plot(&mut sink, cfg, args)?,
        Command::Report { input } => {
            let text = std::fs::read_to_string(input)?;
            let reps = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| serde_json::from_str::<VerificationReport>(l).map_err(|e| CliError::Config(format!("{}: {e}", input.display()))))
                .collect::<Result<Vec<_>, _>>()?;
            sink.line(&summarize(&reps))?;
            return Ok(status_of(&reps));
        }
        Command::Run => {
            let ladder = if needs_ladder(cfg) { Some(load_ladder(cfg)?) } else { None };
            if let Some(l) = &ladder {
                cfg.check_plan_range(l.range())?;
            }
            let reps = execute_plan(cfg, ladder.as_ref(), cli.timings)?;
            sink.reports(cfg, &reps)?;
            return Ok(status_of(&reps));
        }
    }
    sink.inner.flush()?;
    Ok(0)
}

fn write_retardation(sink: &mut Sink, l: &LadderTable, ts: &[f64]) -> Result<(), CliError> {
    sink.line("t,lag,predicted,ratio")?;
    for r in retardation_report(l, ts)? {
        let ratio = r.ratio.map_or(String::new(), |v| format!("{v:?}"));
        sink.line(&format!("{:?},{:?},{:?},{ratio}", r.t, r.lag, r.predicted))?;
    }
    Ok(())
}

fn plot(sink: &mut Sink, cfg: &RunConfig, args: &PlotArgs) -> Result<(), CliError> {
    match args.what {
        PlotKind::Envelope => {
            let t = args.t.ok_or_else(|| CliError::Config("envelope needs --T".into()))?;
            let l = load_ladder(cfg)?;
            sink.line("t,envelope,abs_z")?;
            for r in envelope_23(&l, t, args.nu, args.n, args.points)? {
                sink.line(&format!("{:?},{:?},{:?}", r.t, r.envelope, r.abs_z))?;
            }
        }
        PlotKind::Ladder => {
            let l = load_ladder(cfg)?;
            let ts = grid(args.from.unwrap_or(l.t_lo()), args.to.unwrap_or(l.t_hi()), args.step.unwrap_or(10.0))?;
            sink.line("t,phi1,t_minus_phi1")?;
            for t in ts {
                let phi = l.eval(t)?;
                sink.line(&format!("{t:?},{phi:?},{:?}", t - phi))?;
            }
        }
        PlotKind::Retardation => {
            let l = load_ladder(cfg)?;
            let ts = grid(args.from.unwrap_or(l.anchor_t0()), args.to.unwrap_or(l.t_hi()), args.step.unwrap_or(100.0))?;
            write_retardation(sink, &l, &ts)?;
        }
        PlotKind::ZTrace => {
            let ev = cfg.evaluator()?;
            let (from, to) = match (args.from, args.to) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(CliError::Config("z_trace needs --from and --to".into())),
            };
            sink.line("t,z")?;
            for t in grid(from, to, args.step.unwrap_or(0.01))? {
                sink.line(&format!("{t:?},{:?}", ev.z(t)?))?;
            }
        }
    }
    Ok(())
}
