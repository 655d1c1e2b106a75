//! Browser bindings: spectrum and projector facts, the exact expansion
//! curve, and the level-set sweep of a norm witness. Every entry point takes
//! a family spec such as `hypercube:4` and returns a JSON string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use sse_core::expansion::{max_set_size, min_boundary_by_size, sse_profile_heuristic, sse_profile_with_budget};
use sse_core::rounding::{level_sets, sweep_low, RoundingResult};
use sse_core::spectral::{pq_norm_lower, two_to_inf_norm, Exponent};
use sse_core::theorems::Instance;
use sse_core::{Exact, FamilySpec};

/// Enumeration budget small enough to stay interactive in a browser tab.
const BROWSER_BUDGET: u128 = 5_000_000;
const MAX_VERTICES: usize = 64;

fn instance(spec: &str) -> Result<Instance, String> {
    let spec: FamilySpec = spec.trim().parse().map_err(|e: sse_core::Error| e.to_string())?;
    let g = spec.generate().map_err(|e| e.to_string())?;
    if g.n() > MAX_VERTICES {
        return Err(format!("{spec} has {} vertices; the demo is limited to {MAX_VERTICES}", g.n()));
    }
    Instance::new(spec.to_string(), g).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Analysis {
    graph: String,
    n: usize,
    d: usize,
    eigenvalues: Vec<f64>,
    lambda: f64,
    dimension: usize,
    diagonal: Vec<f64>,
    two_to_inf: f64,
}

pub fn analyze_json(spec: &str, lambda: f64) -> Result<String, String> {
    let inst = instance(spec)?;
    let p = inst.projector(lambda);
    to_json(&Analysis {
        graph: inst.label.clone(),
        n: inst.graph.n(),
        d: inst.graph.d(),
        eigenvalues: inst.spectrum.eigenvalues.clone(),
        lambda,
        dimension: p.dimension(),
        diagonal: p.diagonal(),
        two_to_inf: two_to_inf_norm(&p),
    })
}

#[derive(Serialize)]
struct SizePoint {
    size: usize,
    mu: f64,
    phi: Exact,
    members: Vec<usize>,
}

#[derive(Serialize)]
struct Profile {
    graph: String,
    delta: f64,
    exact: bool,
    value: Exact,
    witness: Vec<usize>,
    /// Smallest `Φ` at each set size (empty when enumeration is over budget).
    by_size: Vec<SizePoint>,
}

pub fn profile_json(spec: &str, delta: f64, seed: u64) -> Result<String, String> {
    let inst = instance(spec)?;
    let (g, n, d) = (&inst.graph, inst.graph.n(), inst.graph.d());
    let (prof, exact) = match sse_profile_with_budget(g, delta, BROWSER_BUDGET) {
        Ok(p) => (p, true),
        Err(sse_core::Error::Budget { .. }) => (sse_profile_heuristic(g, delta, 200, seed).map_err(|e| e.to_string())?, false),
        Err(e) => return Err(e.to_string()),
    };
    let by_size = if exact {
        let (best, _) = min_boundary_by_size(g, max_set_size(n, delta));
        best.into_iter()
            .flatten()
            .map(|(cut, members)| SizePoint {
                size: members.len(),
                mu: members.len() as f64 / n as f64,
                phi: Exact::new(cut as u64, (d * members.len()) as u64),
                members,
            })
            .collect()
    } else {
        Vec::new()
    };
    to_json(&Profile {
        graph: inst.label.clone(),
        delta,
        exact,
        value: prof.value,
        witness: prof.witness.members().to_vec(),
        by_size,
    })
}

#[derive(Serialize)]
struct CurvePoint {
    threshold: f64,
    mu: f64,
    phi: f64,
}

#[derive(Serialize)]
struct Sweep {
    graph: String,
    lambda: f64,
    delta: f64,
    norm_lower: f64,
    witness: Vec<f64>,
    curve: Vec<CurvePoint>,
    result: RoundingResult,
}

/// Finds a `‖P_λ‖_{2→∞}` witness and sweeps the level sets of its square.
pub fn sweep_json(spec: &str, lambda: f64, delta: f64, seed: u64) -> Result<String, String> {
    let inst = instance(spec)?;
    let (g, n, d) = (&inst.graph, inst.graph.n(), inst.graph.d());
    let p = inst.projector(lambda);
    let est = pq_norm_lower(&p, Exponent::TWO, Exponent::INF, 4, seed).map_err(|e| e.to_string())?;
    let w = est.witness.ok_or("the eigenspace is empty at this threshold")?;
    let scores: Vec<f64> = w.iter().map(|x| x * x).collect();
    let (_, sets) = level_sets(g, &scores);
    let curve = sets
        .iter()
        .map(|s| CurvePoint { threshold: s.threshold, mu: s.mu(n).to_f64(), phi: s.phi(d).to_f64() })
        .collect();
    let result = sweep_low(g, &w, delta).map_err(|e| e.to_string())?;
    to_json(&Sweep { graph: inst.label.clone(), lambda, delta, norm_lower: est.lower, witness: w, curve, result })
}

#[wasm_bindgen]
pub fn analyze(spec: &str, lambda: f64) -> Result<String, JsError> {
    analyze_json(spec, lambda).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn profile(spec: &str, delta: f64, seed: u32) -> Result<String, JsError> {
    profile_json(spec, delta, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep(spec: &str, lambda: f64, delta: f64, seed: u32) -> Result<String, JsError> {
    sweep_json(spec, lambda, delta, seed.into()).map_err(|e| JsError::new(&e))
}
