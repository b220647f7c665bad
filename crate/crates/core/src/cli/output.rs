use std::collections::BTreeMap;
use std::fmt::Write;

use crate::verify::{Layer, VerificationReport};

const PARAM_COLUMNS: [&str; 7] = ["T", "U", "nu", "m", "n", "alpha", "beta"];

/// Flattens reports into CSV with a fixed column set; absent values are
/// empty cells.
pub fn reports_to_csv(reps: &[VerificationReport]) -> String {
    let mut s = String::from(
        "equation_id,layer,T,U,nu,m,n,alpha,beta,lhs,rhs,ratio,abs_error,quadrature_error,tolerance,passed\n",
    );
    let cell = |v: Option<&f64>| v.map_or(String::new(), |x| format!("{x:?}"));
    for r in reps {
        let layer = match r.layer {
            Layer::Exact => "exact",
            Layer::Asymptotic => "asymptotic",
        };
        let _ = write!(s, "{},{layer}", r.equation_id);
        for key in &PARAM_COLUMNS {
            let _ = write!(s, ",{}", cell(r.params.get(*key)));
        }
        let _ = writeln!(
            s,
            ",{:?},{:?},{},{:?},{:?},{:?},{}",
            r.lhs,
            r.rhs,
            cell(r.ratio.as_ref()),
            r.abs_error,
            r.quadrature_error,
            r.tolerance,
            r.passed
        );
    }
    s
}

/// One line per equation id: passed/total and the worst ratio error.
pub fn summarize(reps: &[VerificationReport]) -> String {
    let mut by_id: BTreeMap<_, (usize, usize, f64)> = BTreeMap::new();
    for r in reps {
        let e = by_id.entry((r.equation_id, r.layer == Layer::Exact)).or_insert((0, 0, 0.0));
        e.0 += usize::from(r.passed);
        e.1 += 1;
        e.2 = e.2.max(r.ratio_error());
    }
    let mut s = String::from("equation_id,layer,passed,total,worst_error");
    for ((id, exact), (p, n, w)) in by_id {
        let _ = write!(s, "\n{id},{},{p},{n},{w:?}", if exact { "exact" } else { "asymptotic" });
    }
    s
}
