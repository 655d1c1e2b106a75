#![allow(dead_code)]

use sse_core::theorems::Instance;
use sse_core::FamilySpec;

/// Graphs shared by the integration and acceptance tests (all with n <= 32).
pub fn test_family() -> Vec<FamilySpec> {
    let list = [
        "complete:2", "complete:3", "complete:4", "complete:5", "complete:6", "complete:8", "complete:12", "complete:16",
        "cycle:3", "cycle:4", "cycle:5", "cycle:6", "cycle:7", "cycle:8", "cycle:12", "cycle:16", "cycle:24",
        "hypercube:1", "hypercube:2", "hypercube:3", "hypercube:4", "hypercube:5",
        "clique_union:1x4", "clique_union:2x3", "clique_union:3x3", "clique_union:2x4", "clique_union:4x2",
        "clique_union:2x5", "clique_union:3x4",
        "random_regular:8x3@1", "random_regular:10x3@2", "random_regular:12x4@3", "random_regular:16x3@4",
        "random_regular:20x5@5",
    ];
    list.iter().map(|s| s.parse().expect("valid family spec")).collect()
}

pub fn instances() -> Vec<Instance> {
    test_family().iter().map(|s| Instance::from_spec(s).expect("family generates")).collect()
}

pub fn instance(spec: &str) -> Instance {
    Instance::from_spec(&spec.parse().expect("valid family spec")).expect("family generates")
}

/// Distinct eigenvalues (to 1e-9), descending; each is a distinct projector threshold.
pub fn thresholds(inst: &Instance) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &l in &inst.spectrum.eigenvalues {
        if out.last().is_none_or(|&x| x - l > 1e-9) {
            out.push(l);
        }
    }
    out
}
