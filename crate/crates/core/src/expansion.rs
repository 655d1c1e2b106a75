//! Edge expansion `Φ(S)` and the δ-expansion profile `Φ(δ)`.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::par;
use crate::rational::Exact;

/// Default cap on `C(n, k) · k` for exact enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

/// Number of edges with exactly one endpoint in `set`.
pub fn edge_boundary(g: &Graph, set: &VertexSet) -> usize {
    let mask = set.mask();
    set.members().iter().map(|&u| g.neighbors(u).iter().filter(|&&v| !mask[v]).count()).sum()
}

/// `Φ(S) = |E(S, V∖S)| / (d |S|)`, the chance that a random step from a uniform
/// vertex of `S` leaves `S`.
pub fn phi(g: &Graph, set: &VertexSet) -> Result<Exact> {
    check_set(g, set)?;
    if set.is_empty() {
        return Err(Error::Domain("expansion of the empty set is undefined".into()));
    }
    Ok(Exact::new(edge_boundary(g, set) as u64, (g.d() * set.len()) as u64))
}

/// Non-expansion `1 − Φ(S)`.
pub fn phi_bar(g: &Graph, set: &VertexSet) -> Result<Exact> {
    phi(g, set).map(|p| p.complement())
}

fn check_set(g: &Graph, set: &VertexSet) -> Result<()> {
    match set.members().iter().find(|&&v| v >= g.n()) {
        Some(&bad) => Err(Error::Domain(format!("vertex {bad} out of range for n = {}", g.n()))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMode {
    Exact,
    Sampled,
}

/// `Φ(δ)` together with a set attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionProfile {
    pub delta: f64,
    pub value: Exact,
    pub witness: VertexSet,
    pub mode: ProfileMode,
    pub sets_examined: u64,
}

/// Largest admissible set size `⌊δn⌋`, tolerant of `δn` landing a hair below an integer.
pub fn max_set_size(n: usize, delta: f64) -> usize {
    ((delta * n as f64) + 1e-9).floor().max(0.0) as usize
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Exact `Φ(δ)` with the default enumeration budget.
pub fn sse_profile(g: &Graph, delta: f64) -> Result<ExpansionProfile> {
    sse_profile_with_budget(g, delta, DEFAULT_ENUMERATION_BUDGET)
}

/// Exact `Φ(δ)`: the minimum of `Φ(S)` over every nonempty `S` with
/// `|S| <= ⌊δn⌋`, witnessed by the lexicographically least minimizer.
pub fn sse_profile_with_budget(g: &Graph, delta: f64, budget: u128) -> Result<ExpansionProfile> {
    let k = admissible_size(g, delta)?;
    let needed = binomial(g.n(), k).saturating_mul(k as u128);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }

    let (by_size, examined) = min_boundary_by_size(g, k);
    let (_, members) = exact_from_by_size(g, &by_size).expect("at least one singleton is admissible");
    let witness = VertexSet::new(g.n(), members)?;
    Ok(ExpansionProfile { delta, value: phi(g, &witness)?, witness, mode: ProfileMode::Exact, sets_examined: examined })
}

/// Per-size minimum boundary and the set attaining it.
pub type BestBySize = Vec<Option<(usize, Vec<usize>)>>;

/// For each size `s` in `1..=k`, the smallest edge boundary over all sets of
/// that size and the lexicographically least set attaining it (index `s - 1`).
/// Also returns the number of sets visited.
pub fn min_boundary_by_size(g: &Graph, k: usize) -> (BestBySize, u64) {
    let k = k.min(g.n());
    // Subsets are split by their smallest vertex; merging in that order keeps
    // the lexicographically least minimizer of each size.
    let roots: Vec<usize> = (0..g.n()).collect();
    let parts = par::map_collect(roots, |first| {
        let mut search = Enumeration::new(g, k);
        search.visit(first, 0);
        (search.best, search.examined)
    });
    let mut best: Vec<Option<Candidate>> = vec![None; k];
    let mut examined = 0u64;
    for (part, count) in parts {
        examined += count;
        for (slot, cand) in best.iter_mut().zip(part) {
            if let Some(c) = cand {
                if slot.as_ref().is_none_or(|b| c.cut < b.cut) {
                    *slot = Some(c);
                }
            }
        }
    }
    (best.into_iter().map(|c| c.map(|c| (c.cut, c.members))).collect(), examined)
}

fn exact_from_by_size(g: &Graph, by_size: &[Option<(usize, Vec<usize>)>]) -> Option<(Exact, Vec<usize>)> {
    by_size
        .iter()
        .flatten()
        .map(|(cut, members)| Candidate { cut: *cut, size: members.len(), members: members.clone() })
        .min_by(|a, b| a.cmp_value(b))
        .map(|c| (Exact::new(c.cut as u64, (g.d() * c.size) as u64), c.members))
}

fn admissible_size(g: &Graph, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1], got {delta}")));
    }
    let k = max_set_size(g.n(), delta);
    if k < 1 {
        return Err(Error::Domain(format!("floor(delta * n) = 0 for delta = {delta}, n = {}: no admissible sets", g.n())));
    }
    Ok(k.min(g.n()))
}

#[derive(Debug, Clone)]
struct Candidate {
    cut: usize,
    size: usize,
    members: Vec<usize>,
}

impl Candidate {
    /// Compare `cut/size` exactly, then lexicographically by members.
    fn cmp_value(&self, other: &Candidate) -> Ordering {
        (self.cut * other.size)
            .cmp(&(other.cut * self.size))
            .then_with(|| self.members.cmp(&other.members))
    }
}

struct Enumeration<'g> {
    g: &'g Graph,
    k: usize,
    in_set: Vec<bool>,
    stack: Vec<usize>,
    best: Vec<Option<Candidate>>,
    examined: u64,
}

impl<'g> Enumeration<'g> {
    fn new(g: &'g Graph, k: usize) -> Self {
        Enumeration { g, k, in_set: vec![false; g.n()], stack: Vec::with_capacity(k), best: vec![None; k], examined: 0 }
    }

    fn visit(&mut self, v: usize, cut: usize) {
        let inside = self.g.neighbors(v).iter().filter(|&&w| self.in_set[w]).count();
        let cut = cut + self.g.d() - 2 * inside;
        self.in_set[v] = true;
        self.stack.push(v);
        self.examined += 1;

        let size = self.stack.len();
        let slot = &mut self.best[size - 1];
        // Visiting order is lexicographic, so only strict improvements replace.
        if slot.as_ref().is_none_or(|b| cut < b.cut) {
            *slot = Some(Candidate { cut, size, members: self.stack.clone() });
        }
        if size < self.k {
            for w in v + 1..self.g.n() {
                self.visit(w, cut);
            }
        }
        self.stack.pop();
        self.in_set[v] = false;
    }
}

/// Upper bound on `Φ(δ)` from seeded random sets refined by local search.
///
/// All singletons, every connected component and every breadth-first ball
/// of admissible size are evaluated first; then `budget` random starting sets
/// (each from its own `(seed, index)` stream) are improved by add, drop, and
/// swap moves until no move lowers `Φ`.
pub fn sse_profile_heuristic(g: &Graph, delta: f64, budget: usize, seed: u64) -> Result<ExpansionProfile> {
    let k = admissible_size(g, delta)?;
    if budget < 1 {
        return Err(Error::Domain("heuristic budget must be at least 1".into()));
    }
    let mut best: Option<Candidate> = None;
    let mut examined = 0u64;
    let offer = |members: Vec<usize>, best: &mut Option<Candidate>| {
        let c = candidate(g, members);
        if best.as_ref().is_none_or(|b| c.cmp_value(b) == Ordering::Less) {
            *best = Some(c);
        }
    };

    for v in 0..g.n() {
        offer(vec![v], &mut best);
        examined += 1;
    }
    for comp in g.components() {
        if comp.len() <= k {
            offer(comp, &mut best);
            examined += 1;
        }
    }
    for v in 0..g.n() {
        for ball in bfs_prefixes(g, v, k) {
            offer(ball, &mut best);
            examined += 1;
        }
    }

    let starts: Vec<usize> = (0..budget).collect();
    let results = par::map_collect(starts, |idx| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64);
        let size = rng.gen_range(1..=k);
        let mut members: Vec<usize> = if idx % 2 == 0 {
            let mut all: Vec<usize> = (0..g.n()).collect();
            all.shuffle(&mut rng);
            all.truncate(size);
            all
        } else {
            let root = rng.gen_range(0..g.n());
            bfs_prefixes(g, root, size).pop().unwrap_or_else(|| vec![root])
        };
        members.sort_unstable();
        local_search(g, members, k)
    });
    for (members, evals) in results {
        examined += evals;
        offer(members, &mut best);
    }

    let best = best.expect("singletons are always offered");
    let witness = VertexSet::new(g.n(), best.members)?;
    Ok(ExpansionProfile { delta, value: phi(g, &witness)?, witness, mode: ProfileMode::Sampled, sets_examined: examined })
}

fn candidate(g: &Graph, mut members: Vec<usize>) -> Candidate {
    members.sort_unstable();
    let mut mask = vec![false; g.n()];
    for &v in &members {
        mask[v] = true;
    }
    let cut = members.iter().map(|&u| g.neighbors(u).iter().filter(|&&w| !mask[w]).count()).sum();
    Candidate { cut, size: members.len(), members }
}

/// Vertex sets formed by the first `1..=k` vertices of a BFS from `root`.
fn bfs_prefixes(g: &Graph, root: usize, k: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut order = vec![root];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() && order.len() < k {
        let u = order[head];
        head += 1;
        for &w in g.neighbors(u) {
            if !seen[w] && order.len() < k {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    (1..=order.len()).map(|len| order[..len].to_vec()).collect()
}

/// First-improvement local search over add / drop / swap moves, keeping `1 <= |S| <= k`.
fn local_search(g: &Graph, members: Vec<usize>, k: usize) -> (Vec<usize>, u64) {
    let n = g.n();
    let d = g.d();
    let mut in_set = vec![false; n];
    for &v in &members {
        in_set[v] = true;
    }
    let mut size = members.len();
    // inside[v] = number of neighbours of v inside S.
    let mut inside: Vec<usize> = (0..n).map(|v| g.neighbors(v).iter().filter(|&&w| in_set[w]).count()).collect();
    let mut cut: usize = (0..n).filter(|&v| in_set[v]).map(|v| d - inside[v]).sum();
    let mut evals = 0u64;

    let better = |c1: usize, s1: usize, c0: usize, s0: usize| c1 * s0 < c0 * s1;
    let toggle = |v: usize, in_set: &mut Vec<bool>, inside: &mut Vec<usize>| {
        let adding = !in_set[v];
        in_set[v] = adding;
        for &w in g.neighbors(v) {
            if adding {
                inside[w] += 1;
            } else {
                inside[w] -= 1;
            }
        }
    };

    loop {
        let mut moved = false;
        // add
        if size < k {
            for v in 0..n {
                if in_set[v] {
                    continue;
                }
                evals += 1;
                let c = cut + d - 2 * inside[v];
                if better(c, size + 1, cut, size) {
                    toggle(v, &mut in_set, &mut inside);
                    cut = c;
                    size += 1;
                    moved = true;
                    break;
                }
            }
        }
        // drop
        if !moved && size > 1 {
            for v in 0..n {
                if !in_set[v] {
                    continue;
                }
                evals += 1;
                let c = cut + 2 * inside[v] - d;
                if better(c, size - 1, cut, size) {
                    toggle(v, &mut in_set, &mut inside);
                    cut = c;
                    size -= 1;
                    moved = true;
                    break;
                }
            }
        }
        // swap: drop u, add v
        if !moved {
            'swap: for u in 0..n {
                if !in_set[u] {
                    continue;
                }
                let after_drop = cut + 2 * inside[u] - d;
                for v in 0..n {
                    if in_set[v] || v == u {
                        continue;
                    }
                    evals += 1;
                    let adj = usize::from(g.has_edge(u, v));
                    // v's neighbours inside S once u has left.
                    let c = after_drop + d - 2 * (inside[v] - adj);
                    if c < cut {
                        toggle(u, &mut in_set, &mut inside);
                        toggle(v, &mut in_set, &mut inside);
                        cut = c;
                        moved = true;
                        break 'swap;
                    }
                }
            }
        }
        if !moved {
            break;
        }
    }
    ((0..n).filter(|&v| in_set[v]).collect(), evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};

    fn graph(s: &str) -> Graph {
        generate(&s.parse().unwrap()).unwrap()
    }

    fn set(n: usize, m: &[usize]) -> VertexSet {
        VertexSet::new(n, m.iter().copied()).unwrap()
    }

    #[test]
    fn phi_examples() {
        let k4 = graph("complete:4");
        assert_eq!(phi(&k4, &set(4, &[0])).unwrap(), Exact::one());
        assert_eq!(phi(&k4, &set(4, &[1, 3])).unwrap(), Exact::new(2, 3));
        let cu = graph("clique_union:2x3");
        assert_eq!(phi(&cu, &set(6, &[3, 4, 5])).unwrap(), Exact::zero());
        assert_eq!(phi_bar(&cu, &set(6, &[3, 4, 5])).unwrap(), Exact::one());
        assert!(matches!(phi(&k4, &VertexSet::empty(4)), Err(Error::Domain(_))));
        assert_eq!(phi(&k4, &VertexSet::full(4)).unwrap(), Exact::zero());
    }

    #[test]
    fn phi_complement_symmetry() {
        let g = graph("random_regular:12x3@4");
        for mask in 1u32..(1 << 12) - 1 {
            let s = VertexSet::new(12, (0..12).filter(|i| mask >> i & 1 == 1)).unwrap();
            let c = s.complement();
            let lhs = phi(&g, &s).unwrap().0;
            let rhs = phi(&g, &c).unwrap().0 * num_rational::Ratio::new(c.len() as u64, s.len() as u64);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn exact_profile_examples() {
        let k8 = sse_profile(&graph("complete:8"), 0.25).unwrap();
        assert_eq!(k8.value, Exact::new(6, 7));
        assert_eq!(k8.witness.members(), &[0, 1]);
        assert_eq!(k8.mode, ProfileMode::Exact);
        assert_eq!(k8.sets_examined, 8 + 28);

        let cu = sse_profile(&graph("clique_union:2x3"), 0.5).unwrap();
        assert_eq!(cu.value, Exact::zero());
        assert_eq!(cu.witness.members(), &[0, 1, 2]);

        let c6 = sse_profile(&graph("cycle:6"), 0.5).unwrap();
        assert_eq!(c6.value, Exact::new(1, 3));
        assert_eq!(c6.witness.members(), &[0, 1, 2]);
    }

    #[test]
    fn profile_rejects_bad_delta_and_budget() {
        let g = graph("cycle:6");
        assert!(matches!(sse_profile(&g, 0.0), Err(Error::Domain(_))));
        assert!(matches!(sse_profile(&g, 1.5), Err(Error::Domain(_))));
        assert!(matches!(sse_profile(&g, 0.1), Err(Error::Domain(_))));
        let q6 = graph("hypercube:6");
        assert!(matches!(sse_profile(&q6, 0.5), Err(Error::Budget { .. })));
        assert!(matches!(sse_profile_with_budget(&g, 0.5, 10), Err(Error::Budget { needed: 60, budget: 10 })));
    }

    #[test]
    fn heuristic_examples() {
        let cu = sse_profile_heuristic(&graph("clique_union:2x3"), 0.5, 100, 1).unwrap();
        assert_eq!(cu.value, Exact::zero());
        assert_eq!(cu.mode, ProfileMode::Sampled);
        let k8 = sse_profile_heuristic(&graph("complete:8"), 0.25, 1000, 2).unwrap();
        assert_eq!(k8.value, Exact::new(6, 7));
        let g = graph("random_regular:16x3@9");
        let exact = sse_profile(&g, 1.0 / 16.0).unwrap();
        let sampled = sse_profile_heuristic(&g, 1.0 / 16.0, 1, 0).unwrap();
        assert_eq!(exact.value, sampled.value);
    }

    #[test]
    fn heuristic_is_an_upper_bound_and_deterministic() {
        for s in ["random_regular:14x3@1", "random_regular:16x4@2", "cycle:12", "hypercube:4"] {
            let g = graph(s);
            for delta in [0.125, 0.25, 0.5] {
                let exact = sse_profile(&g, delta).unwrap();
                let sampled = sse_profile_heuristic(&g, delta, 50, 3).unwrap();
                assert!(sampled.value >= exact.value, "{s} {delta}");
                assert_eq!(phi(&g, &sampled.witness).unwrap(), sampled.value);
                assert!(sampled.witness.len() <= max_set_size(g.n(), delta));
                assert_eq!(sampled, sse_profile_heuristic(&g, delta, 50, 3).unwrap());
            }
        }
    }

    #[test]
    fn profile_is_monotone_in_delta() {
        let g = graph("random_regular:12x3@5");
        let values: Vec<Exact> = (1..=12).map(|s| sse_profile(&g, s as f64 / 12.0).unwrap().value).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "{values:?}");
    }

    #[test]
    fn disconnected_small_component_gives_zero() {
        let g = generate(&FamilySpec::CliqueUnion { m: 4, k: 3 }).unwrap();
        assert_eq!(sse_profile(&g, 0.25).unwrap().value, Exact::zero());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(24, 12), 2_704_156);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }
}
