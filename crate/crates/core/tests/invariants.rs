mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use sse_core::expansion::{phi, sse_profile};
use sse_core::rounding::{round_witness, walk};
use sse_core::spectral::{pq_norm_lower, pq_norm_upper, Exponent};
use sse_core::theorems::{verify_duality, verify_main, verify_projector_subspace, Verdict, VerifyConfig};
use sse_core::{inner, lp_norm, FamilySpec, Graph};

use common::{instance, instances, thresholds};

fn e(s: &str) -> Exponent {
    s.parse().unwrap()
}

#[test]
fn spectra_reconstruct_the_operator() {
    for inst in instances() {
        let s = &inst.spectrum;
        assert!(s.residual <= 1e-9, "{}", inst.label);
        assert!(s.orthonormality_error() <= 1e-9, "{}", inst.label);
        assert!((s.reconstruct() - inst.adjacency.matrix()).amax() <= 1e-9, "{}", inst.label);
        assert!(s.eigenvalues.iter().all(|l| l.abs() <= 1.0 + 1e-9));
    }
}

#[test]
fn rayleigh_quotient_on_eigenspaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for inst in instances().iter().take(12) {
        for lambda in thresholds(inst) {
            let p = inst.projector(lambda);
            for _ in 0..1000 {
                let g: Vec<f64> = (0..inst.graph.n()).map(|_| rng.sample(StandardNormal)).collect();
                let v = p.apply(&g);
                let l2 = lp_norm(&v, 2.0).unwrap();
                let vav = inner(&v, &walk(&inst.graph, &v)).unwrap();
                assert!(vav >= lambda * l2 * l2 - 1e-9 * l2.max(1.0).powi(2), "{} λ={lambda}", inst.label);
            }
        }
    }
}

#[test]
fn lower_bounds_sit_below_upper_bounds() {
    let pairs = [("2", "4"), ("2", "inf"), ("4", "inf"), ("2", "2"), ("3", "6")];
    for inst in instances() {
        for lambda in thresholds(&inst).into_iter().take(3) {
            let proj = inst.projector(lambda);
            for (p, q) in pairs {
                let (p, q) = (e(p), e(q));
                let lo = pq_norm_lower(&proj, p, q, 2, 5).unwrap();
                let hi = pq_norm_upper(&proj, p, q).unwrap();
                assert!(lo.lower <= hi + 1e-9, "{} λ={lambda} ({p},{q}): {} > {hi}", inst.label, lo.lower);
                if let Some(w) = &lo.witness {
                    assert!(proj.distance_to_range(w) <= 1e-8 || p != Exponent::TWO);
                }
            }
        }
    }
}

#[test]
fn duality_on_eigenspace_projectors() {
    for spec in ["hypercube:3", "cycle:8", "clique_union:2x3", "random_regular:10x3@2"] {
        let inst = instance(spec);
        let proj = inst.projector(0.2);
        for (p, q) in [("4/3", "2"), ("2", "4"), ("1", "2")] {
            let r = verify_duality(proj.matrix(), e(p), e(q), 16, 3).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{spec} ({p},{q}): {}", r.to_json());
        }
    }
}

#[test]
fn projector_norm_matches_subspace_norm() {
    for inst in instances().iter().filter(|i| i.graph.n() <= 16) {
        for lambda in thresholds(inst).into_iter().take(2) {
            for (p, q) in [("2", "4"), ("2", "inf")] {
                let r = verify_projector_subspace(inst, lambda, e(p), e(q), 1000, 9, 4).unwrap();
                assert_eq!(r.verdict, Verdict::Holds, "{} λ={lambda} ({p},{q}): {}", inst.label, r.to_json());
            }
        }
    }
}

#[test]
fn contrapositive_and_pipeline_consistency() {
    let cfg = VerifyConfig::default();
    let pairs = [(Exponent::TWO, Exponent::INF), (Exponent::TWO, e("4"))];
    for inst in instances() {
        for (delta, eps) in [(1.0 / 16.0, 0.1), (1.0 / 8.0, 0.05), (0.2, 0.2)] {
            let r = verify_main(&inst, delta, eps, &pairs, &cfg).unwrap();
            assert_ne!(r.verdict, Verdict::Violated, "{}: {}", inst.label, r.to_json());
            let bound = 1.0 / delta.sqrt();
            let proj = inst.projector(1.0 - eps);
            for &(p, q) in &pairs {
                let est = pq_norm_lower(&proj, p, q, cfg.restarts, cfg.seed).unwrap();
                if r.evidence.details["hypothesis"] == "satisfied" {
                    assert!(est.lower < bound, "{}: lower {} reaches {bound}", inst.label, est.lower);
                }
                let Some(w) = est.witness else { continue };
                let l1 = lp_norm(&w, 1.0).unwrap();
                let l2 = lp_norm(&w, 2.0).unwrap();
                if l1 * l1 > delta * l2 * l2 {
                    continue;
                }
                let rounded = round_witness(&inst.graph, &w, delta, eps).unwrap();
                if let (Some(set), Some(mu), Some(f)) = (rounded.set, rounded.mu, rounded.phi) {
                    assert!(mu.to_f64() <= 4.0 * delta + 1e-12);
                    assert_eq!(phi(&inst.graph, &set).unwrap(), f);
                    let target = 2.0 * eps.sqrt();
                    if f.to_f64() < target {
                        assert!(sse_profile(&inst.graph, 4.0 * delta).unwrap().value.to_f64() < target);
                    }
                }
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let cfg = VerifyConfig { seed: 7, ..VerifyConfig::default() };
    let pairs = [(Exponent::TWO, e("4")), (Exponent::TWO, Exponent::INF)];
    for spec in ["complete:8", "random_regular:12x3@1", "clique_union:3x4"] {
        let a = verify_main(&instance(spec), 0.0625, 0.18, &pairs, &cfg).unwrap();
        let b = verify_main(&instance(spec), 0.0625, 0.18, &pairs, &cfg).unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json());
    }
}

fn family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (2usize..10).prop_map(|n| FamilySpec::Complete { n }),
        (3usize..20).prop_map(|n| FamilySpec::Cycle { n }),
        (1usize..6).prop_map(|k| FamilySpec::Hypercube { k }),
        (1usize..5, 2usize..5).prop_map(|(m, k)| FamilySpec::CliqueUnion { m, k }),
        (3usize..10, any::<u64>()).prop_map(|(h, s)| FamilySpec::RandomRegular { n: 2 * h, d: 3, seed: Some(s) }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_lists_round_trip(spec in family()) {
        let g = spec.generate().unwrap();
        let text = g.write_edge_list();
        let back = Graph::load_edge_list(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.write_edge_list(), text);
    }

    #[test]
    fn family_specs_round_trip(spec in family()) {
        let shown = spec.to_string();
        prop_assert_eq!(shown.parse::<FamilySpec>().unwrap(), spec);
    }
}
