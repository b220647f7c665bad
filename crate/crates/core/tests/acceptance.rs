//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; the process fails if any criterion
//! fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zladder::ladder::{build_ladder, pushforward_integral, retardation_report, LadderCache, LadderConfig, LadderTable};
use zladder::rszeta::ZEvaluator;
use zladder::verify::{
    distance_report, ln_t_placement_shift, ratio_error_nonincreasing, sanity_theorem2_exact, verify_bessel_baseline,
    verify_corollary, verify_theorem1, verify_theorem2, EquationId, Theorem2Case, VerificationReport,
};

const LADDER_T_LO: f64 = 1e3;
// φ₁⁻¹(10⁵ + 2) ≈ 1.07·10⁵, so the domain reaches past 10⁵ + 10².
const LADDER_T_HI: f64 = 1.1e5;
const LADDER_TOL: f64 = 1e-8;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_agreement() -> Outcome {
    let ev = ZEvaluator::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut dz, mut dth) = (0.0f64, 0.0f64);
    for i in 0..200 {
        let t = match i {
            0 => 1e2,
            199 => 1e5,
            _ => 10f64.powf(rng.gen_range(2.0..5.0)),
        };
        dz = dz.max((ev.z_rs(t).unwrap() - ev.z_oracle(t).unwrap()).abs());
        dth = dth.max((ev.theta(t).unwrap() - ev.theta_oracle(t).unwrap()).abs());
    }
    check(dz <= 1e-5 && dth <= 1e-9, format!("max |dZ| = {dz:e} (<= 1e-5), max |dtheta| = {dth:e} (<= 1e-9)"))
}

fn bessel_baseline() -> Outcome {
    let mut worst_off = 0.0f64;
    let mut worst_diag = 0.0f64;
    for nu in [0.0, 0.5, 1.0] {
        for r in verify_bessel_baseline(nu, 6, 1e-9).map_err(|e| e.to_string())? {
            if r.params["m"] == r.params["n"] {
                worst_diag = worst_diag.max(r.abs_error);
            } else {
                worst_off = worst_off.max(r.abs_error);
            }
        }
    }
    check(
        worst_off <= 1e-9 && worst_diag <= 1e-9,
        format!("max off-diagonal {worst_off:e}, max diagonal error {worst_diag:e} (<= 1e-9)"),
    )
}

fn theorem1(l: &LadderTable) -> Outcome {
    let mut worst_off = 0.0f64;
    let mut worst_rel = 0.0f64;
    for t in [5e3, 1e4, 5e4] {
        for nu in [0.0, 1.0] {
            for r in verify_theorem1(l, t, nu, 5, 1e-4).map_err(|e| e.to_string())? {
                match r.equation_id {
                    EquationId::E1_3_offdiag => worst_off = worst_off.max(r.lhs.abs()),
                    EquationId::E1_3_diag => worst_rel = worst_rel.max(r.abs_error / r.rhs),
                    _ => {}
                }
            }
        }
    }
    check(
        worst_off <= 1e-4 && worst_rel <= 1e-4,
        format!("max |I_mn| = {worst_off:e}, max diagonal relative error {worst_rel:e} (<= 1e-4)"),
    )
}

fn substitution(l: &LadderTable) -> Outcome {
    let base = 1e4;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let deg = rng.gen_range(0..=6);
        let c: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let exact: f64 = c.iter().enumerate().map(|(k, ck)| ck / (k + 1) as f64).sum();
        let f = |x: f64| c.iter().rev().fold(0.0, |acc, ck| acc * (x - base) + ck);
        let got = pushforward_integral(l, f, base, 1.0, 1e-11).map_err(|e| e.to_string())?.value;
        worst = worst.max((got - exact).abs() / (1.0 + exact.abs()));
    }
    check(worst <= 1e-7, format!("max |pushforward - exact|/(1+|exact|) = {worst:e} (<= 1e-7)"))
}

fn theorem2_cases(n_max: usize) -> Vec<Theorem2Case> {
    let mut cases = Vec::new();
    for n in 1..=n_max {
        cases.push(Theorem2Case::E2_5 { alpha: 0.5, beta: -0.5, n });
        cases.push(Theorem2Case::E2_5 { alpha: -0.3, beta: 1.7, n });
        cases.push(Theorem2Case::E2_6 { n });
        cases.push(Theorem2Case::E2_7 { n });
        cases.push(Theorem2Case::E2_9 { n });
    }
    cases.push(Theorem2Case::E2_8);
    cases.push(Theorem2Case::E2_10);
    cases
}

fn sanity_layer(l: &LadderTable) -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_singular = 0.0f64;
    let mut failures = Vec::new();
    for case in theorem2_cases(4) {
        let singular = matches!(case, Theorem2Case::E2_7 { .. } | Theorem2Case::E2_8);
        let tol = if singular { 1e-3 } else { 1e-4 };
        let r = sanity_theorem2_exact(l, 5e3, &case, tol).map_err(|e| e.to_string())?;
        if singular {
            worst_singular = worst_singular.max(r.ratio_error());
        } else {
            worst = worst.max(r.ratio_error());
        }
        if !r.passed {
            failures.push(format!("{case:?}"));
        }
    }
    check(
        failures.is_empty(),
        format!("max |ratio-1| = {worst:e} (<= 1e-4), singular {worst_singular:e} (<= 1e-3), failing {failures:?}"),
    )
}

/// Reports at T = 10³, 10⁴, 10⁵ for each (equation, n) pair.
fn asymptotic_runs(l: &LadderTable) -> Result<Vec<(String, Vec<VerificationReport>)>, String> {
    let ts = [1e3, 1e4, 1e5];
    let mut runs = Vec::new();
    for nu in [0.0, 1.0] {
        for n in 1..=4 {
            let reps = verify_corollary(l, &ts, nu, n, 0.25).map_err(|e| e.to_string())?;
            runs.push((format!("E2_2 nu={nu} n={n}"), reps));
            let case = Theorem2Case::E2_4 { nu, n };
            let reps = ts.iter().map(|&t| verify_theorem2(l, t, &case, 0.25)).collect::<Result<Vec<_>, _>>();
            runs.push((format!("{case:?}"), reps.map_err(|e| e.to_string())?));
        }
    }
    for case in theorem2_cases(4) {
        let reps = ts.iter().map(|&t| verify_theorem2(l, t, &case, 0.25)).collect::<Result<Vec<_>, _>>();
        runs.push((format!("{case:?}"), reps.map_err(|e| e.to_string())?));
    }
    Ok(runs)
}

fn asymptotic_layer(runs: &[(String, Vec<VerificationReport>)]) -> Outcome {
    let mut over = Vec::new();
    let mut worst = 0.0f64;
    let mut monotone = 0;
    for (name, reps) in runs {
        let last = reps.last().expect("three T values");
        worst = worst.max(last.ratio_error());
        if last.ratio_error() > 0.25 {
            over.push(name.clone());
        }
        if ratio_error_nonincreasing(reps) {
            monotone += 1;
        }
    }
    let share = monotone as f64 / runs.len() as f64;
    check(
        over.is_empty() && share >= 0.8,
        format!(
            "{} pairs; max |ratio-1| at T=1e5 = {worst:.4} (<= 0.25); nonincreasing in {monotone}/{} = {:.0}% (>= 80%); over tolerance {over:?}",
            runs.len(),
            runs.len(),
            share * 100.0
        ),
    )
}

fn structure(l: &LadderTable, runs: &[(String, Vec<VerificationReport>)]) -> Outcome {
    let d = distance_report(l, 1e5, 0.1).map_err(|e| e.to_string())?;
    let dist_ratio = d.ratio.unwrap();
    let mut worst_shift = 0.0f64;
    let mut shift_ok = true;
    for r in runs.iter().flat_map(|(_, reps)| reps) {
        let shift = ln_t_placement_shift(l, r).map_err(|e| e.to_string())?;
        let bound = 2.0 / r.params["T"].ln();
        shift_ok &= shift <= bound;
        worst_shift = worst_shift.max(shift * r.params["T"].ln() / 2.0);
    }
    let rows = retardation_report(l, &[l.anchor_t0(), 1e4, 1e5]).map_err(|e| e.to_string())?;
    let anchor_ratio = rows[0].ratio;
    check(
        (0.9..=1.1).contains(&dist_ratio) && shift_ok && anchor_ratio == Some(1.0),
        format!(
            "E1_4 ratio at T=1e5 = {dist_ratio:.5}; max ln-T shift = {worst_shift:.4} of 2/ln T; anchor ratio {anchor_ratio:?}, ratios at 1e4/1e5 = {:.4}/{:.4}",
            rows[1].ratio.unwrap(),
            rows[2].ratio.unwrap()
        ),
    )
}

fn zladder(args: &[&str], cache: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_zladder"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .output()
        .expect("binary runs")
}

fn engineering(l: &LadderTable) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let text = LadderCache::encode(l);
    let back = LadderCache::decode(&text).map_err(|e| e.to_string())?;
    let bit_stable = back == *l
        && back.checkpoint_values().iter().zip(l.checkpoint_values()).all(|(a, b)| a.to_bits() == b.to_bits())
        && LadderCache::encode(&back) == text;
    ok &= bit_stable;
    notes.push(format!("cache round trip bit-stable: {bit_stable}"));

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = dir.path().join("cache");
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "[ladder]\nt_lo = 1000.0\nt_hi = 1200.0\n\n[plan]\nequations = [\"E1_2\", \"E1_3_diag\", \"E1_3_offdiag\", \"E2_6\", \"E2_7\"]\nt_list = [950.0, 1000.0]\nnu = [0.0]\nn_max = 2\nbaseline_n_max = 3\n",
    )
    .map_err(|e| e.to_string())?;
    let cfg = config.to_str().unwrap();
    let first = zladder(&["--config", cfg, "run"], &cache);
    let second = zladder(&["--config", cfg, "run"], &cache);
    let identical = first.status.code() == Some(0)
        && second.status.code() == Some(0)
        && first.stdout == second.stdout
        && !first.stdout.is_empty()
        && String::from_utf8_lossy(&second.stderr).contains("reused");
    ok &= identical;
    notes.push(format!("identical runs byte-identical with cache reuse: {identical}"));

    let mut plan_bad = std::fs::read_to_string(&config).unwrap();
    plan_bad = plan_bad.replace("t_list = [950.0, 1000.0]", "t_list = [950.0, 5000.0]");
    std::fs::write(&config, plan_bad).unwrap();
    let bad_t = zladder(&["--config", cfg, "run"], &cache);
    let named = String::from_utf8_lossy(&bad_t.stderr).contains("5000");
    let c64 = bad_t.status.code() == Some(64) && named;
    ok &= c64;
    notes.push(format!("T outside domain -> {:?} naming T: {named}", bad_t.status.code()));

    for entry in std::fs::read_dir(&cache).map_err(|e| e.to_string())? {
        let p = entry.map_err(|e| e.to_string())?.path();
        if p.file_name().unwrap().to_string_lossy().starts_with("ladder-") {
            let t = std::fs::read_to_string(&p).unwrap();
            std::fs::write(&p, &t[..t.len() / 2]).unwrap();
        }
    }
    let corrupt = zladder(&["--t-lo", "1000", "--t-hi", "1200", "ladder", "query", "--t", "1100"], &cache);
    ok &= corrupt.status.code() == Some(65);
    notes.push(format!("corrupt cache -> {:?}", corrupt.status.code()));

    let nonconv = zladder(&["--max-panels", "1", "verify", "baseline", "--nu", "0", "--max-n", "8", "--tol", "1e-12"], &cache);
    ok &= nonconv.status.code() == Some(70);
    notes.push(format!("panel budget exhausted -> {:?}", nonconv.status.code()));

    check(ok, notes.join("; "))
}

fn main() {
    let total = Instant::now();
    let mut failed = 0;
    let mut report = |label: &str, elapsed: Duration, outcome: Outcome| {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {label} ({:.1} s): {detail}", elapsed.as_secs_f64());
    };
    let timed = |f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        (start.elapsed(), o)
    };

    let (e, o) = timed(&oracle_agreement);
    report("1 oracle agreement", e, o);
    let (e, o) = timed(&bessel_baseline);
    report("2 Bessel baseline", e, o);

    let start = Instant::now();
    let ladder = build_ladder(&ZEvaluator::default(), &LadderConfig::new(LADDER_T_LO, LADDER_T_HI, LADDER_TOL))
        .expect("acceptance ladder builds");
    let build = start.elapsed();
    println!("ladder on [{LADDER_T_LO}, {LADDER_T_HI}] at tol {LADDER_TOL:e} built in {:.1} s", build.as_secs_f64());

    let (e, o) = timed(&|| theorem1(&ladder));
    report("3 Theorem 1 exactness", e + build, o);
    let (e, o) = timed(&|| substitution(&ladder));
    report("4 substitution identity", e, o);
    let (e, o) = timed(&|| sanity_layer(&ladder));
    report("5 Theorem 2 sanity layer", e, o);
    let start = Instant::now();
    let runs = asymptotic_runs(&ladder);
    let e = start.elapsed();
    match &runs {
        Ok(runs) => report("6 asymptotic layer", e, asymptotic_layer(runs)),
        Err(msg) => report("6 asymptotic layer", e, Err(msg.clone())),
    }
    let (e, o) = match &runs {
        Ok(runs) => timed(&|| structure(&ladder, runs)),
        Err(msg) => (Duration::ZERO, Err(msg.clone())),
    };
    report("7 structure diagnostics", e, o);
    let (e, o) = timed(&|| engineering(&ladder));
    report("8 engineering", e, o);

    println!("acceptance: {} of 8 criteria passed in {:.1} s", 8 - failed, total.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
