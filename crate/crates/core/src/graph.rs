//! Simple regular graphs, vertex sets, and the built-in test families.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Exact;

/// Retry budget for the pairing model before giving up.
pub const PAIRING_RETRIES: usize = 1000;

/// A finite, undirected, simple, `d`-regular graph on vertices `0..n`.
///
/// Values are immutable once built; every constructor validates symmetry,
/// regularity, and simplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    d: usize,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Build a graph from an undirected edge list, validating every invariant.
    pub fn from_edges(n: usize, d: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_dims(n, d)?;
        let mut adjacency = vec![Vec::with_capacity(d); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parameter(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::Simplicity(format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Self::from_adjacency(n, d, adjacency)
    }

    fn from_adjacency(n: usize, d: usize, mut adjacency: Vec<Vec<usize>>) -> Result<Self> {
        for (u, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Simplicity(format!("repeated edge {{{u}, {}}}", w[0])));
            }
            if nbrs.len() != d {
                return Err(Error::Regularity { vertex: u, found: nbrs.len(), expected: d });
            }
        }
        let g = Graph { n, d, adjacency };
        debug_assert!(g.is_symmetric());
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of undirected edges, `nd/2`.
    pub fn m(&self) -> usize {
        self.n * self.d / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.adjacency
            .iter()
            .enumerate()
            .all(|(u, nbrs)| nbrs.iter().all(|&v| self.has_edge(v, u)))
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Parse the edge-list text format: header `n d`, then one `u v` line
    /// per edge with `u < v`. Blank lines and `#` comments are skipped.
    pub fn load_edge_list(text: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(text)
            .map_err(|e| Error::Parse { line: 0, msg: format!("not valid UTF-8: {e}") })?;
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (a, b) = parse_pair(line, line_no)?;
            match header {
                None => {
                    check_dims(a, b).map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
                    header = Some((a, b));
                }
                Some((n, _)) => {
                    if a == b {
                        return Err(Error::Simplicity(format!("self-loop at vertex {a} (line {line_no})")));
                    }
                    if a > b || b >= n {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("edge must satisfy 0 <= u < v < {n}, got `{line}`"),
                        });
                    }
                    edges.push((a, b));
                }
            }
        }
        let (n, d) = header.ok_or(Error::Parse { line: 0, msg: "missing `n d` header".into() })?;
        Graph::from_edges(n, d, &edges)
    }

    pub fn write_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.d);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// 0/1 indicator of `set` as a real vector.
    pub fn indicator(&self, set: &VertexSet) -> Vec<f64> {
        let mut v = vec![0.0; self.n];
        for &i in set.members() {
            v[i] = 1.0;
        }
        v
    }
}

fn check_dims(n: usize, d: usize) -> Result<()> {
    if d < 1 || d >= n {
        return Err(Error::Parameter(format!("need 1 <= d < n, got n = {n}, d = {d}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::Parameter(format!("n·d must be even, got n = {n}, d = {d}")));
    }
    Ok(())
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse { line: line_no, msg: format!("missing {what}") })?;
        tok.parse::<usize>()
            .map_err(|_| Error::Parse { line: line_no, msg: format!("invalid integer `{tok}`") })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::Parse { line: line_no, msg: "expected exactly two fields".into() });
    }
    Ok((a, b))
}

/// A sorted, deduplicated subset of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexSet {
    members: Vec<usize>,
    #[serde(skip)]
    n: usize,
}

impl VertexSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&v| v >= n) {
            return Err(Error::Domain(format!("vertex {bad} out of range for n = {n}")));
        }
        Ok(VertexSet { members, n })
    }

    pub fn empty(n: usize) -> Self {
        VertexSet { members: Vec::new(), n }
    }

    pub fn full(n: usize) -> Self {
        VertexSet { members: (0..n).collect(), n }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn complement(&self) -> Self {
        VertexSet { members: (0..self.n).filter(|v| !self.contains(*v)).collect(), n: self.n }
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &v in &self.members {
            m[v] = true;
        }
        m
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// `μ(S) = |S|/n`.
pub fn density(g: &Graph, s: &VertexSet) -> Result<Exact> {
    if let Some(&bad) = s.members().iter().find(|&&v| v >= g.n()) {
        return Err(Error::Domain(format!("vertex {bad} out of range for n = {}", g.n())));
    }
    Ok(Exact::new(s.len() as u64, g.n() as u64))
}

/// A named graph family with its parameters.
///
/// The textual form (used by the CLI and reports) is `complete:N`, `cycle:N`,
/// `hypercube:K`, `clique_union:MxK`, or `random_regular:NxD@SEED`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Complete { n: usize },
    Cycle { n: usize },
    Hypercube { k: usize },
    /// `m` disjoint copies of `K_k`.
    CliqueUnion { m: usize, k: usize },
    RandomRegular { n: usize, d: usize, seed: Option<u64> },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Graph> {
        generate(self)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Complete { n } => write!(f, "complete:{n}"),
            FamilySpec::Cycle { n } => write!(f, "cycle:{n}"),
            FamilySpec::Hypercube { k } => write!(f, "hypercube:{k}"),
            FamilySpec::CliqueUnion { m, k } => write!(f, "clique_union:{m}x{k}"),
            FamilySpec::RandomRegular { n, d, seed: Some(s) } => write!(f, "random_regular:{n}x{d}@{s}"),
            FamilySpec::RandomRegular { n, d, seed: None } => write!(f, "random_regular:{n}x{d}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("unrecognised family spec `{s}`"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let pair = |t: &str| -> Result<(usize, usize)> {
            let (a, b) = t.split_once(['x', ',']).ok_or_else(bad)?;
            Ok((num(a)?, num(b)?))
        };
        match name.trim() {
            "complete" => Ok(FamilySpec::Complete { n: num(args)? }),
            "cycle" => Ok(FamilySpec::Cycle { n: num(args)? }),
            "hypercube" => Ok(FamilySpec::Hypercube { k: num(args)? }),
            "clique_union" => {
                let (m, k) = pair(args)?;
                Ok(FamilySpec::CliqueUnion { m, k })
            }
            "random_regular" => {
                let (dims, seed) = match args.split_once('@') {
                    Some((a, s)) => (a, Some(s.trim().parse::<u64>().map_err(|_| bad())?)),
                    None => (args, None),
                };
                let (n, d) = pair(dims)?;
                Ok(FamilySpec::RandomRegular { n, d, seed })
            }
            _ => Err(bad()),
        }
    }
}

/// Build a graph from a family description.
pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    match *spec {
        FamilySpec::Complete { n } => {
            if n < 2 {
                return Err(Error::Parameter(format!("complete graph needs n >= 2, got {n}")));
            }
            let adjacency = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
            Graph::from_adjacency(n, n - 1, adjacency)
        }
        FamilySpec::Cycle { n } => {
            if n < 3 {
                return Err(Error::Parameter(format!("cycle needs n >= 3, got {n}")));
            }
            let edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
            Graph::from_edges(n, 2, &edges)
        }
        FamilySpec::Hypercube { k } => {
            if !(1..=20).contains(&k) {
                return Err(Error::Parameter(format!("hypercube dimension must be in 1..=20, got {k}")));
            }
            let n = 1usize << k;
            let adjacency = (0..n).map(|u| (0..k).map(|b| u ^ (1 << b)).collect()).collect();
            Graph::from_adjacency(n, k, adjacency)
        }
        FamilySpec::CliqueUnion { m, k } => {
            if m < 1 || k < 2 {
                return Err(Error::Parameter(format!("clique_union needs m >= 1 and k >= 2, got m = {m}, k = {k}")));
            }
            let adjacency = (0..m * k)
                .map(|u| {
                    let base = (u / k) * k;
                    (base..base + k).filter(|&v| v != u).collect()
                })
                .collect();
            Graph::from_adjacency(m * k, k - 1, adjacency)
        }
        FamilySpec::RandomRegular { n, d, seed } => {
            check_dims(n, d)?;
            let seed = seed.ok_or_else(|| Error::Parameter("random_regular requires a seed".into()))?;
            pairing_model(n, d, seed)
        }
    }
}

fn pairing_model(n: usize, d: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..PAIRING_RETRIES {
        points.shuffle(&mut rng);
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || adjacency[u].contains(&v) {
                continue 'attempt;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        return Graph::from_adjacency(n, d, adjacency);
    }
    Err(Error::Generation {
        attempts: PAIRING_RETRIES,
        reason: format!("pairing model kept producing loops or multi-edges for n = {n}, d = {d}"),
    })
}
