use super::{timed, CliError, RunConfig};
use crate::ladder::LadderTable;
use crate::verify::{
    distance_report, sanity_theorem2_exact, verify_bessel_baseline, verify_corollary, verify_theorem1,
    verify_theorem2, EquationId, Theorem2Case, VerificationReport, VerifyError,
};

/// Whether any planned equation needs the ladder.
pub fn needs_ladder(cfg: &RunConfig) -> bool {
    cfg.plan.equations.iter().any(|e| *e != EquationId::E1_2)
}

struct Collector {
    timings: bool,
    out: Vec<VerificationReport>,
}

impl Collector {
    fn run<F>(&mut self, job: F) -> Result<(), CliError>
    where
        F: FnOnce() -> Result<Vec<VerificationReport>, VerifyError>,
    {
        self.out.extend(timed(self.timings, job)?);
        Ok(())
    }
}

fn theorem2_cases(cfg: &RunConfig, id: EquationId) -> Result<Vec<Theorem2Case>, VerifyError> {
    let p = &cfg.plan;
    let ns = 1..=p.n_max;
    let mut cases = Vec::new();
    match id {
        EquationId::E2_4 => {
            for &nu in &p.nu {
                for n in ns.clone() {
                    cases.push(Theorem2Case::from_id(id, n, nu, 0.0, 0.0)?);
                }
            }
        }
        EquationId::E2_5 => {
            for &[alpha, beta] in &p.jacobi {
                for n in ns.clone() {
                    cases.push(Theorem2Case::from_id(id, n, 0.0, alpha, beta)?);
                }
            }
        }
        EquationId::E2_8 | EquationId::E2_10 => cases.push(Theorem2Case::from_id(id, 0, 0.0, 0.0, 0.0)?),
        _ => {
            for n in ns {
                cases.push(Theorem2Case::from_id(id, n, 0.0, 0.0, 0.0)?);
            }
        }
    }
    Ok(cases)
}

/// Executes the verification plan in a fixed order: equations in id
/// order, then T ascending, then the equation's own parameters.
pub fn execute_plan(
    cfg: &RunConfig,
    ladder: Option<&LadderTable>,
    timings: bool,
) -> Result<Vec<VerificationReport>, CliError> {
    let p = &cfg.plan;
    let mut ids = p.equations.clone();
    ids.sort();
    ids.dedup();
    let mut c = Collector { timings, out: Vec::new() };
    let need = || ladder.ok_or_else(|| CliError::Config("plan needs a ladder".into()));

    if ids.contains(&EquationId::E1_2) {
        for &nu in &p.nu {
            c.run(|| verify_bessel_baseline(nu, p.baseline_n_max, p.baseline_tol))?;
        }
    }
    let t1: Vec<EquationId> = ids
        .iter()
        .copied()
        .filter(|e| matches!(e, EquationId::E1_3_offdiag | EquationId::E1_3_diag))
        .collect();
    if !t1.is_empty() {
        let l = need()?;
        for &t in &p.t_list {
            for &nu in &p.nu {
                c.run(|| {
                    let mut reps = verify_theorem1(l, t, nu, p.n_max, p.exact_tol)?;
                    reps.retain(|r| t1.contains(&r.equation_id));
                    Ok(reps)
                })?;
            }
        }
    }
    if ids.contains(&EquationId::E1_4) {
        let l = need()?;
        for &t in &p.t_list {
            c.run(|| Ok(vec![distance_report(l, t, 0.1)?]))?;
        }
    }
    if ids.contains(&EquationId::E2_2) {
        let l = need()?;
        for &nu in &p.nu {
            for n in 1..=p.n_max {
                c.run(|| verify_corollary(l, &p.t_list, nu, n, p.ratio_tol))?;
            }
        }
    }
    for &id in ids.iter().filter(|e| **e >= EquationId::E2_4) {
        let l = need()?;
        let cases = theorem2_cases(cfg, id)?;
        for &t in &p.t_list {
            for case in &cases {
                c.run(|| {
                    let mut reps = vec![verify_theorem2(l, t, case, p.ratio_tol)?];
                    if p.sanity {
                        reps.push(sanity_theorem2_exact(l, t, case, p.exact_tol)?);
                    }
                    Ok(reps)
                })?;
            }
        }
    }
    Ok(c.out)
}
