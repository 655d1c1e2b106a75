//! Cached evaluation of expansion hypotheses `Φ(density) ⋈ target`.

use crate::error::Error;
use crate::expansion::{max_set_size, sse_profile_heuristic, sse_profile_with_budget, ExpansionProfile};
use crate::graph::Graph;
use crate::rational::Exact;

use super::VerifyConfig;

#[derive(Debug, Clone)]
pub(crate) enum Outcome {
    /// No nonempty set is small enough, so the infimum is over an empty family.
    Vacuous,
    Satisfied(ExpansionProfile),
    NotSatisfied(ExpansionProfile),
    Unknown(String),
}

/// Evaluates a hypothesis on `Φ(density)`: first by the seeded heuristic
/// (any set it finds is an exact counterexample), then by exact enumeration.
/// Both profiles are cached, so one oracle can serve several targets.
pub(crate) struct HypothesisOracle<'g> {
    g: &'g Graph,
    density: f64,
    cfg: VerifyConfig,
    heuristic: Option<ExpansionProfile>,
    exact: Option<Result<ExpansionProfile, Error>>,
}

impl<'g> HypothesisOracle<'g> {
    pub(crate) fn new(g: &'g Graph, density: f64, cfg: &VerifyConfig) -> Self {
        HypothesisOracle { g, density: density.min(1.0), cfg: cfg.clone(), heuristic: None, exact: None }
    }

    /// `holds(Φ)` says whether a value of `Φ(density)` satisfies the hypothesis;
    /// it must be monotone (if it holds for a value it holds for larger ones).
    pub(crate) fn check(&mut self, holds: impl Fn(Exact) -> bool) -> Outcome {
        if max_set_size(self.g.n(), self.density) == 0 {
            return Outcome::Vacuous;
        }
        let (g, density, cfg) = (self.g, self.density, &self.cfg);
        let heuristic = self.heuristic.get_or_insert_with(|| {
            sse_profile_heuristic(g, density, cfg.heuristic_budget, cfg.seed).expect("admissible size checked above")
        });
        if !holds(heuristic.value) {
            return Outcome::NotSatisfied(heuristic.clone());
        }
        let exact = self.exact.get_or_insert_with(|| sse_profile_with_budget(g, density, cfg.enumeration_budget));
        match exact {
            Ok(p) if holds(p.value) => Outcome::Satisfied(p.clone()),
            Ok(p) => Outcome::NotSatisfied(p.clone()),
            Err(e) => Outcome::Unknown(e.to_string()),
        }
    }
}
