use serde::Serialize;

use super::report::{Claim, Inputs, Report, Verdict};
use super::{Instance, Stopwatch, VerifyConfig, CHECK_TOL};
use crate::error::{Error, Result};
use crate::expansion::min_boundary_by_size;
use crate::graph::VertexSet;
use crate::rational::Exact;
use crate::spectral::pq::upper_with_method;
use crate::spectral::Exponent;

#[derive(Debug, Clone, Serialize)]
struct SizeRow {
    size: usize,
    phi_bar: Exact,
    rhs: f64,
    slack: f64,
}

/// Checks `Φ̄(S) <= ‖P_ε‖_{p→q} μ(S)^{1/p − 1/q} + ε` for every enumerated
/// nonempty `S`, with `P_ε` the projector onto eigenvalues `>= ε`.
///
/// For each size only the sets of smallest boundary matter, since they
/// maximize `Φ̄` at a fixed right-hand side. All sizes are covered when
/// `n <= cfg.easy_full_enumeration_max_n`, otherwise sizes up to
/// `cfg.easy_size_cap`.
pub fn verify_easy_direction(inst: &Instance, epsilon: f64, p: Exponent, q: Exponent, cfg: &VerifyConfig) -> Result<Report> {
    if p >= q {
        return Err(Error::Domain(format!("easy direction needs p < q, got p = {p}, q = {q}")));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("epsilon = {epsilon} is outside [0, 1]")));
    }
    let clock = Stopwatch::start();
    let inputs = Inputs {
        graph: Some(inst.label.clone()),
        delta: None,
        epsilon: Some(epsilon),
        p: Some(p),
        q: Some(q),
        seed: Some(cfg.seed),
        pairs: Vec::new(),
        lambda: Some(epsilon),
        restarts: None,
        trials: None,
    };
    let mut report = Report::new(Claim::EasyDirection, inputs);
    report.tolerance("inequality", CHECK_TOL);
    report.detail("eigenvalue_threshold", epsilon);

    let projector = inst.projector(epsilon);
    report.detail("eigenspace_dimension", projector.dimension());
    let (ub, method) = match upper_with_method(&projector, p, q) {
        Ok(u) => u,
        Err(e) => {
            report.detail("upper_bound_error", e.to_string());
            report.verdict = Verdict::Inconclusive;
            report.runtime_ms = clock.elapsed_ms();
            return Ok(report);
        }
    };
    report.evidence.norm_upper = Some(ub);
    report.detail("upper_method", method);

    let (n, d) = (inst.graph.n(), inst.graph.d());
    let cap = if n <= cfg.easy_full_enumeration_max_n { n } else { cfg.easy_size_cap.min(n) };
    report.detail("max_set_size", cap);
    let (by_size, examined) = min_boundary_by_size(&inst.graph, cap);
    report.detail("sets_examined", examined);

    let exponent = 1.0 / p.value() - if q.is_inf() { 0.0 } else { 1.0 / q.value() };
    let mut rows = Vec::with_capacity(cap);
    let mut worst: Option<(f64, Vec<usize>)> = None;
    for (cut, members) in by_size.into_iter().flatten() {
        let s = members.len();
        let phi_bar = Exact::new((d * s - cut) as u64, (d * s) as u64);
        let rhs = ub * (s as f64 / n as f64).powf(exponent) + epsilon;
        let slack = rhs - phi_bar.to_f64();
        if worst.as_ref().is_none_or(|(w, _)| slack < *w) {
            worst = Some((slack, members));
        }
        rows.push(SizeRow { size: s, phi_bar, rhs, slack });
    }
    if let Some((slack, members)) = worst {
        let set = VertexSet::new(n, members)?;
        let row = rows.iter().find(|r| r.size == set.len()).expect("worst row recorded");
        report.evidence.phi_delta = Some(row.phi_bar);
        report.evidence.bound_rhs = Some(row.rhs);
        report.evidence.witness_set = Some(set);
        report.detail("worst_slack", slack);
        report.verdict = if slack < -CHECK_TOL { Verdict::Violated } else { Verdict::Holds };
    } else {
        report.verdict = Verdict::Holds;
    }
    report.detail("sizes", rows);
    report.runtime_ms = clock.elapsed_ms();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;

    fn inst(s: &str) -> Instance {
        Instance::from_spec(&s.parse::<FamilySpec>().unwrap()).unwrap()
    }

    fn run(s: &str, eps: f64) -> Report {
        verify_easy_direction(&inst(s), eps, Exponent::TWO, Exponent::INF, &VerifyConfig::default()).unwrap()
    }

    #[test]
    fn clique_union_is_tight_at_the_triangle() {
        let r = run("clique_union:2x3", 0.9);
        assert_eq!(r.verdict, Verdict::Holds);
        assert!((r.evidence.norm_upper.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.evidence.witness_set.as_ref().unwrap().members(), &[0, 1, 2]);
        assert_eq!(r.evidence.phi_delta, Some(Exact::one()));
        assert!((r.evidence.bound_rhs.unwrap() - 1.9).abs() < 1e-9);
        // With ε → 0 the projector is unchanged (λ ∈ {1, 1, −1/2, ...}) and the slack closes.
        let r = run("clique_union:2x3", 1e-6);
        let slack = r.evidence.details["worst_slack"].as_f64().unwrap();
        assert!(slack.abs() < 1e-5, "{slack}");
    }

    #[test]
    fn complete_and_hypercube() {
        let r = run("complete:4", 0.5);
        assert_eq!(r.verdict, Verdict::Holds);
        assert!((r.evidence.norm_upper.unwrap() - 1.0).abs() < 1e-12);
        let r = run("hypercube:3", 0.3);
        assert_eq!(r.verdict, Verdict::Holds);
        assert!((r.evidence.norm_upper.unwrap() - 2.0).abs() < 1e-9);
        let half = &r.evidence.details["sizes"][3];
        assert_eq!(half["phi_bar"]["exact"], "2/3");
        assert!((half["rhs"].as_f64().unwrap() - (2.0 * 0.5f64.sqrt() + 0.3)).abs() < 1e-9);
    }

    #[test]
    fn unsupported_pair_is_inconclusive() {
        let p: Exponent = "4/3".parse().unwrap();
        let r = verify_easy_direction(&inst("cycle:6"), 0.5, p, Exponent::TWO, &VerifyConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(verify_easy_direction(&inst("cycle:6"), 0.5, Exponent::INF, Exponent::TWO, &VerifyConfig::default()).is_err());
    }

    #[test]
    fn large_graphs_use_the_size_cap() {
        let r = run("hypercube:5", 0.5);
        assert_eq!(r.evidence.details["max_set_size"], 6);
        assert_eq!(r.verdict, Verdict::Holds);
    }
}
