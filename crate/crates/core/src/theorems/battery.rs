use super::eigenspace::verify_main_with;
use super::hypothesis::HypothesisOracle;
use super::report::Report;
use super::{Instance, VerifyConfig};
use crate::error::Result;
use crate::graph::FamilySpec;
use crate::par;
use crate::spectral::Exponent;

/// `(2,4)`, `(2,∞)`, `(4,∞)` and the dual check `(4/3,2)`.
pub fn default_pairs() -> Vec<(Exponent, Exponent)> {
    let four = Exponent::new(4.0).expect("4 >= 1");
    let four_thirds = Exponent::new(4.0 / 3.0).expect("4/3 >= 1");
    vec![(Exponent::TWO, four), (Exponent::TWO, Exponent::INF), (four, Exponent::INF), (four_thirds, Exponent::TWO)]
}

/// Complete graphs up to 12 vertices, hypercubes up to dimension 5, seeded
/// random 3-regular graphs on up to 24 vertices (seeds 1 to 10), and every
/// union of `m` disjoint `k`-cliques with `k >= 2` and `mk <= 24`.
pub fn main_theorem_battery() -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    specs.extend((2..=12).map(|n| FamilySpec::Complete { n }));
    specs.extend((1..=5).map(|k| FamilySpec::Hypercube { k }));
    for n in (4..=24).step_by(2) {
        specs.extend((1..=10).map(|s| FamilySpec::RandomRegular { n, d: 3, seed: Some(s) }));
    }
    for k in 2..=24 {
        specs.extend((1..=24 / k).map(|m| FamilySpec::CliqueUnion { m, k }));
    }
    specs
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub deltas: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub pairs: Vec<(Exponent, Exponent)>,
    pub verify: VerifyConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            deltas: vec![1.0 / 32.0, 1.0 / 16.0, 1.0 / 8.0],
            epsilons: vec![0.05, 0.1, 0.2],
            pairs: vec![(Exponent::TWO, Exponent::new(4.0).expect("4 >= 1")), (Exponent::TWO, Exponent::INF)],
            verify: VerifyConfig::default(),
        }
    }
}

/// Runs [`verify_main`](super::verify_main) on every `(spec, δ, ε)`. Graphs
/// are processed in parallel; reports come back in input order, then by
/// `δ`, then by `ε`.
pub fn run_main_sweep(specs: &[FamilySpec], cfg: &SweepConfig) -> Result<Vec<Report>> {
    let per_graph = par::map_collect(specs.to_vec(), |spec| -> Result<Vec<Report>> {
        let inst = Instance::from_spec(&spec)?;
        let mut out = Vec::with_capacity(cfg.deltas.len() * cfg.epsilons.len());
        for &delta in &cfg.deltas {
            let mut oracle = HypothesisOracle::new(&inst.graph, 4.0 * delta, &cfg.verify);
            for &eps in &cfg.epsilons {
                out.push(verify_main_with(&inst, delta, eps, &cfg.pairs, &cfg.verify, &mut oracle)?);
            }
        }
        Ok(out)
    });
    let mut reports = Vec::new();
    for r in per_graph {
        reports.extend(r?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorems::Verdict;

    #[test]
    fn battery_composition() {
        let b = main_theorem_battery();
        assert_eq!(b.iter().filter(|s| matches!(s, FamilySpec::Complete { .. })).count(), 11);
        assert_eq!(b.iter().filter(|s| matches!(s, FamilySpec::RandomRegular { .. })).count(), 110);
        assert!(b.contains(&FamilySpec::CliqueUnion { m: 12, k: 2 }));
        assert!(!b.contains(&FamilySpec::CliqueUnion { m: 5, k: 5 }));
        assert_eq!(default_pairs().len(), 4);
    }

    #[test]
    fn small_sweep_never_violates() {
        let specs = ["complete:6", "hypercube:3", "clique_union:2x4"].map(|s| s.parse().unwrap());
        let reports = run_main_sweep(&specs, &SweepConfig::default()).unwrap();
        assert_eq!(reports.len(), 27);
        assert!(reports.iter().all(|r| r.verdict != Verdict::Violated));
        assert_eq!(reports[0].inputs.graph.as_deref(), Some("complete:6"));
    }
}
