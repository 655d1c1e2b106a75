//! Per-claim numerical verifiers producing [`Report`]s.
//!
//! Each verifier evaluates a hypothesis exactly where it can (enumerating
//! vertex sets), bounds the relevant operator norms from both sides, and
//! returns `holds`, `hypothesis_not_satisfied`, `violated` (always with a
//! re-checkable witness), or `inconclusive`.

mod battery;
mod easy;
mod eigenspace;
mod hypothesis;
mod lemmas;
mod report;

pub use battery::{default_pairs, main_theorem_battery, run_main_sweep, SweepConfig};
pub use easy::verify_easy_direction;
pub use eigenspace::{verify_high_expansion, verify_main};
pub use lemmas::{inner_product_gap, verify_duality, verify_lemma_inner_product, verify_projector_subspace};
pub use report::{Claim, Evidence, Inputs, Report, Verdict};

use crate::error::Result;
use crate::expansion::DEFAULT_ENUMERATION_BUDGET;
use crate::graph::{FamilySpec, Graph};
use crate::rounding::DEFAULT_HIGH_EXPANSION_C;
use crate::spectral::{eigendecompose, normalized_adjacency, top_eigenspace, Projector, Spectrum, SymmetricOperator};

/// Absolute slack used for every inequality check in the verifiers.
pub const CHECK_TOL: f64 = 1e-9;

/// Knobs shared by the verifiers. Every search is seeded, so a report is a
/// pure function of its inputs and this configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random restarts for `p → q` lower bounds.
    pub restarts: usize,
    /// Random starts for the heuristic expansion search run before exact enumeration.
    pub heuristic_budget: usize,
    pub enumeration_budget: u128,
    /// `C` in the high-expansion hypothesis `Φ(δ) > 1 − C ε²`.
    pub high_c: f64,
    /// The easy direction enumerates every subset up to this many vertices...
    pub easy_full_enumeration_max_n: usize,
    /// ...and otherwise every subset of at most this size.
    pub easy_size_cap: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            restarts: 16,
            heuristic_budget: 200,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            high_c: DEFAULT_HIGH_EXPANSION_C,
            easy_full_enumeration_max_n: 16,
            easy_size_cap: 6,
        }
    }
}

/// A graph with its label and spectrum, computed once and shared by verifiers.
#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub graph: Graph,
    pub adjacency: SymmetricOperator,
    pub spectrum: Spectrum,
}

impl Instance {
    pub fn new(label: impl Into<String>, graph: Graph) -> Result<Self> {
        let adjacency = normalized_adjacency(&graph);
        let spectrum = eigendecompose(&adjacency)?;
        Ok(Instance { label: label.into(), graph, adjacency, spectrum })
    }

    pub fn from_spec(spec: &FamilySpec) -> Result<Self> {
        Instance::new(spec.to_string(), spec.generate()?)
    }

    pub fn projector(&self, lambda: f64) -> Projector {
        top_eigenspace(&self.spectrum, lambda)
    }
}

/// Milliseconds since `start`; always 0 on wasm, which has no monotonic clock.
pub(crate) struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    pub(crate) fn elapsed_ms(&self) -> u64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_millis() as u64
        }
        #[cfg(target_arch = "wasm32")]
        {
            0
        }
    }
}
