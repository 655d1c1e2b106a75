//! Level-set sweeps: local Cheeger rounding of real vectors into vertex sets.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rational::Exact;

/// Default constant `C` in the high-expansion bound `1 − C ε²`.
pub const DEFAULT_HIGH_EXPANSION_C: f64 = 100.0;

/// Output of a sweep over the level sets of a score vector.
///
/// When `found`, `set = {i : score_i >= threshold}`; sets never split equal scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingResult {
    pub found: bool,
    pub set: Option<VertexSet>,
    pub phi: Option<Exact>,
    pub mu: Option<Exact>,
    #[serde(serialize_with = "serialize_extended")]
    pub bound: f64,
    /// The bound says nothing about `Φ` (it is `>= 1` or `<= 0`).
    pub vacuous: bool,
    pub threshold: Option<f64>,
    pub level_sets_examined: usize,
    /// `2√ε` for witness rounding.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    /// Witness rounding produced a set with `Φ < 2√ε`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
}

/// Serialize non-finite floats as the strings `"inf"`, `"-inf"`, `"nan"`.
pub(crate) fn serialize_extended<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// `(Av)_i`: the average of `v` over the neighbours of `i`.
pub fn walk(g: &Graph, v: &[f64]) -> Vec<f64> {
    let d = g.d() as f64;
    (0..g.n()).map(|i| g.neighbors(i).iter().map(|&j| v[j]).sum::<f64>() / d).collect()
}

/// One level set in a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet {
    pub threshold: f64,
    pub size: usize,
    /// Edges leaving the set.
    pub cut: usize,
}

impl LevelSet {
    pub fn phi(&self, d: usize) -> Exact {
        Exact::new(self.cut as u64, (d * self.size) as u64)
    }

    pub fn mu(&self, n: usize) -> Exact {
        Exact::new(self.size as u64, n as u64)
    }
}

/// Every level set `{i : score_i >= t}` for `t` ranging over the distinct
/// scores, largest threshold first. The last entry is always `V`.
pub fn level_sets(g: &Graph, scores: &[f64]) -> (Vec<usize>, Vec<LevelSet>) {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut in_set = vec![false; n];
    let mut cut = 0usize;
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let t = scores[order[i]];
        while i < n && scores[order[i]] == t {
            let v = order[i];
            let inside = g.neighbors(v).iter().filter(|&&w| in_set[w]).count();
            cut = cut + g.d() - 2 * inside;
            in_set[v] = true;
            i += 1;
        }
        out.push(LevelSet { threshold: t, size: i, cut });
    }
    (order, out)
}

fn check_vector(g: &Graph, v: &[f64]) -> Result<()> {
    if v.len() != g.n() {
        return Err(Error::Dimension { expected: g.n(), found: v.len() });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("vector has non-finite entries".into()));
    }
    if v.iter().all(|&x| x == 0.0) {
        return Err(Error::Domain("zero vector has no level sets".into()));
    }
    Ok(())
}

/// Sweep proper level sets of `scores`, returning the minimum-`Φ` one with
/// `μ <= cap`. The full vertex set is never returned: it always has `Φ = 0`.
fn sweep(g: &Graph, scores: &[f64], cap: f64, bound: f64, vacuous: bool) -> Result<RoundingResult> {
    let n = g.n();
    let (order, sets) = level_sets(g, scores);
    let mut best: Option<&LevelSet> = None;
    for ls in sets.iter().filter(|ls| ls.size < n && (ls.size as f64) <= cap * n as f64 + 1e-9) {
        let better = match best {
            None => true,
            Some(b) => ls.cut * b.size < b.cut * ls.size,
        };
        if better {
            best = Some(ls);
        }
    }
    let mut result = RoundingResult {
        found: false,
        set: None,
        phi: None,
        mu: None,
        bound,
        vacuous,
        threshold: None,
        level_sets_examined: sets.len(),
        target: None,
        certified: None,
    };
    if let Some(ls) = best {
        let set = VertexSet::new(n, order[..ls.size].iter().copied())?;
        result.found = true;
        result.phi = Some(ls.phi(g.d()));
        result.mu = Some(ls.mu(n));
        result.threshold = Some(ls.threshold);
        result.set = Some(set);
    }
    Ok(result)
}

/// `‖v‖_1² / ‖v‖_2²` and `⟨v, Av⟩ / ‖v‖_2²`, both with expectation norms.
fn collision_and_rayleigh(g: &Graph, v: &[f64]) -> (f64, f64) {
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    let l2sq: f64 = v.iter().map(|x| x * x).sum();
    let av = walk(g, v);
    let vav: f64 = v.iter().zip(&av).map(|(a, b)| a * b).sum();
    let n = g.n() as f64;
    ((l1 * l1 / n) / l2sq, vav / l2sq)
}

/// The low-expansion local Cheeger right-hand side for a given Rayleigh
/// quotient `⟨v,Av⟩/‖v‖²` and collision ratio `‖v‖_1²/(δ‖v‖_2²)`.
pub fn lcb_formula(rayleigh: f64, collision_over_delta: f64) -> f64 {
    let radicand = (1.0 - rayleigh * rayleigh).clamp(0.0, 1.0);
    let den = 1.0 - collision_over_delta;
    if den <= 0.0 {
        f64::INFINITY
    } else {
        radicand.sqrt() / den
    }
}

/// `sqrt(1 − ⟨v,Av⟩²/‖v‖_2⁴) / (1 − ‖v‖_1²/(δ‖v‖_2²))`, or `+∞` when the
/// denominator is not positive.
pub fn lcb_bound_low(g: &Graph, v: &[f64], delta: f64) -> Result<f64> {
    check_vector(g, v)?;
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let (collision, rayleigh) = collision_and_rayleigh(g, v);
    Ok(lcb_formula(rayleigh, collision / delta))
}

/// Sweep the level sets of `v²` with density cap `delta`.
pub fn sweep_low(g: &Graph, v: &[f64], delta: f64) -> Result<RoundingResult> {
    let bound = lcb_bound_low(g, v, delta)?;
    let scores: Vec<f64> = v.iter().map(|x| x * x).collect();
    sweep(g, &scores, delta, bound, !(bound < 1.0))
}

/// Sweep the level sets of `(Az + z)²` with density cap `delta`, reporting
/// the high-expansion bound `1 − C ε²` with `ε = ‖Az‖_2² / ‖z‖_2²`.
pub fn sweep_high(g: &Graph, z: &[f64], delta: f64, c: f64) -> Result<RoundingResult> {
    check_vector(g, z)?;
    let az = walk(g, z);
    let eps = az.iter().map(|x| x * x).sum::<f64>() / z.iter().map(|x| x * x).sum::<f64>();
    let bound = 1.0 - c * eps * eps;
    let scores: Vec<f64> = az.iter().zip(z).map(|(a, b)| (a + b) * (a + b)).collect();
    sweep(g, &scores, delta, bound, bound <= 0.0 || bound >= 1.0)
}

/// Round a dense eigenspace witness into a small set: normalize `w` to unit
/// `ℓ_1` mass, sweep `z²` with density cap `4δ`, and report whether the set
/// found has `Φ < 2√ε`.
///
/// Requires the collision condition `‖w‖_1² <= δ ‖w‖_2²`.
pub fn round_witness(g: &Graph, w: &[f64], delta: f64, epsilon: f64) -> Result<RoundingResult> {
    check_vector(g, w)?;
    if !(delta > 0.0) || !(epsilon > 0.0) {
        return Err(Error::Domain(format!("delta and epsilon must be positive, got {delta}, {epsilon}")));
    }
    let (collision, _) = collision_and_rayleigh(g, w);
    let ratio = collision / delta;
    if ratio > 1.0 + 1e-12 {
        return Err(Error::Precondition(format!(
            "collision condition fails: ‖w‖_1² / (δ‖w‖_2²) = {ratio} > 1"
        )));
    }
    let mass: f64 = w.iter().map(|x| x.abs()).sum();
    let z: Vec<f64> = w.iter().map(|x| x / mass).collect();
    let mut result = sweep_low(g, &z, 4.0 * delta)?;
    let target = 2.0 * epsilon.sqrt();
    result.target = Some(target);
    result.certified = Some(result.phi.is_some_and(|p| p.to_f64() < target));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::phi;
    use crate::graph::generate;
    use proptest::prelude::*;

    fn graph(s: &str) -> Graph {
        generate(&s.parse().unwrap()).unwrap()
    }

    fn indicator(n: usize, members: &[usize]) -> Vec<f64> {
        let mut v = vec![0.0; n];
        members.iter().for_each(|&i| v[i] = 1.0);
        v
    }

    fn half_cube() -> Vec<f64> {
        (0..8).map(|x| if x & 1 == 1 { 1.0 } else { 0.0 }).collect()
    }

    #[test]
    fn lcb_low_examples() {
        let cu = graph("clique_union:2x3");
        assert_eq!(lcb_bound_low(&cu, &indicator(6, &[0, 1, 2]), 1.0).unwrap(), 0.0);
        for s in ["cycle:7", "hypercube:3", "random_regular:10x3@1"] {
            let g = graph(s);
            assert_eq!(lcb_bound_low(&g, &vec![1.0; g.n()], 2.0).unwrap(), 0.0);
            assert_eq!(lcb_bound_low(&g, &vec![1.0; g.n()], 0.5).unwrap(), f64::INFINITY);
        }
        // sqrt(1 - 0.99^2) / (1 - 1/4), computed by hand: sqrt(0.0199) / 0.75.
        let want = 0.141_067_359_796_658_8 / 0.75;
        assert!((lcb_formula(0.99, 0.25) - want).abs() < 1e-12);
        assert!((want - 0.188_089_8).abs() < 1e-6);
        assert!(matches!(lcb_bound_low(&cu, &[0.0; 6], 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn sweep_low_examples() {
        let cu = graph("clique_union:2x3");
        let r = sweep_low(&cu, &indicator(6, &[0, 1, 2]), 0.5).unwrap();
        assert!(r.found);
        assert_eq!(r.set.as_ref().unwrap().members(), &[0, 1, 2]);
        assert_eq!(r.phi, Some(Exact::zero()));
        assert_eq!(r.mu, Some(Exact::new(1, 2)));

        let q3 = graph("hypercube:3");
        let r = sweep_low(&q3, &half_cube(), 0.5).unwrap();
        assert_eq!(r.set.as_ref().unwrap().members(), &[1, 3, 5, 7]);
        assert_eq!(r.phi, Some(Exact::new(1, 3)));

        let r = sweep_low(&q3, &[1.0; 8], 0.5).unwrap();
        assert!(!r.found);
        assert_eq!(r.level_sets_examined, 1);
    }

    #[test]
    fn sweep_high_examples() {
        let cu = graph("clique_union:2x3");
        let r = sweep_high(&cu, &indicator(6, &[0, 1, 2]), 0.5, DEFAULT_HIGH_EXPANSION_C).unwrap();
        assert_eq!(r.phi, Some(Exact::zero()));
        assert_eq!(r.set.as_ref().unwrap().members(), &[0, 1, 2]);
        // Az = z so ε = 1 and the bound 1 - 100 is vacuous.
        assert_eq!(r.bound, -99.0);
        assert!(r.vacuous);

        assert!(!sweep_high(&cu, &[1.0; 6], 0.5, 100.0).unwrap().found);

        let q3 = graph("hypercube:3");
        let dictator: Vec<f64> = (0..8).map(|x| if x & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let r = sweep_high(&q3, &dictator, 0.5, 100.0).unwrap();
        assert!(!r.found);
        assert_eq!(r.level_sets_examined, 1);
        // ε = 1/9 here, so with C = 1 the bound is 1 - 1/81.
        let r = sweep_high(&q3, &dictator, 0.5, 1.0).unwrap();
        assert!((r.bound - (1.0 - 1.0 / 81.0)).abs() < 1e-12);
        assert!(!r.vacuous);
    }

    #[test]
    fn round_witness_examples() {
        let cu = graph("clique_union:2x3");
        let r = round_witness(&cu, &indicator(6, &[0, 1, 2]), 0.5, 0.01).unwrap();
        assert_eq!(r.set.as_ref().unwrap().members(), &[0, 1, 2]);
        assert_eq!((r.phi, r.mu), (Some(Exact::zero()), Some(Exact::new(1, 2))));
        assert_eq!(r.certified, Some(true));

        let q3 = graph("hypercube:3");
        let r = round_witness(&q3, &half_cube(), 0.5, 0.25).unwrap();
        assert_eq!(r.phi, Some(Exact::new(1, 3)));
        assert_eq!(r.certified, Some(true));
        assert_eq!(r.target, Some(1.0));

        let k4 = graph("complete:4");
        let err = round_witness(&k4, &[1.0; 4], 0.5, 0.01).unwrap_err();
        assert!(matches!(&err, Error::Precondition(m) if m.contains("= 2")), "{err}");
    }

    #[test]
    fn level_sets_never_split_ties() {
        let g = graph("cycle:8");
        let scores = [3.0, 1.0, 3.0, 2.0, 1.0, 0.0, 2.0, 3.0];
        let (order, sets) = level_sets(&g, &scores);
        let sizes: Vec<usize> = sets.iter().map(|s| s.size).collect();
        assert_eq!(sizes, vec![3, 5, 7, 8]);
        for ls in &sets {
            let members = VertexSet::new(8, order[..ls.size].iter().copied()).unwrap();
            let expected = VertexSet::new(8, (0..8).filter(|&i| scores[i] >= ls.threshold)).unwrap();
            assert_eq!(members, expected);
            assert_eq!(phi(&g, &members).unwrap(), ls.phi(2));
        }
    }

    proptest! {
        #[test]
        fn sweep_low_is_scale_invariant(
            v in prop::collection::vec(-3i32..=3, 12),
            c in prop_oneof![Just(-2.0f64), Just(0.5), Just(3.0), Just(-1.0)],
            delta in prop_oneof![Just(0.25f64), Just(0.5)],
        ) {
            prop_assume!(v.iter().any(|&x| x != 0));
            let g = graph("random_regular:12x3@6");
            let v: Vec<f64> = v.into_iter().map(f64::from).collect();
            let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
            let a = sweep_low(&g, &v, delta).unwrap();
            let b = sweep_low(&g, &scaled, delta).unwrap();
            prop_assert_eq!(a.set, b.set);
            prop_assert_eq!(a.phi, b.phi);
            prop_assert!((a.bound - b.bound).abs() <= 1e-12 || a.bound == b.bound);
        }

        #[test]
        fn found_sets_recompute_exactly(v in prop::collection::vec(-5.0..5.0f64, 10), delta in 0.1..1.0f64) {
            let g = graph("random_regular:10x3@2");
            let r = sweep_low(&g, &v, delta).unwrap();
            if let Some(set) = &r.set {
                prop_assert_eq!(Some(phi(&g, set).unwrap()), r.phi);
                prop_assert!(r.mu.unwrap().to_f64() <= delta + 1e-9);
                let t = r.threshold.unwrap();
                let expected = VertexSet::new(10, (0..10).filter(|&i| v[i] * v[i] >= t)).unwrap();
                prop_assert_eq!(set, &expected);
            }
        }
    }
}
