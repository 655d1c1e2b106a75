use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::graph::VertexSet;
use crate::rational::Exact;
use crate::rounding::serialize_extended;
use crate::spectral::Exponent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    EasyDirection,
    MainTheorem,
    HighExpansion,
    HolderDuality,
    InnerProductLemma,
    ProjectorSubspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    HypothesisNotSatisfied,
    Violated,
    Inconclusive,
}

impl Verdict {
    /// Combine per-pair verdicts: any violation wins, then inconclusive.
    pub fn worst(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Violated, _) | (_, Violated) => Violated,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (HypothesisNotSatisfied, _) | (_, HypothesisNotSatisfied) => HypothesisNotSatisfied,
            _ => Holds,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HypothesisNotSatisfied => "hypothesis_not_satisfied",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Inputs {
    pub graph: Option<String>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub p: Option<Exponent>,
    pub q: Option<Exponent>,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<(Exponent, Exponent)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Evidence {
    pub phi_delta: Option<Exact>,
    pub witness_set: Option<VertexSet>,
    pub norm_lower: Option<f64>,
    pub norm_upper: Option<f64>,
    #[serde(serialize_with = "serialize_opt_extended")]
    pub bound_rhs: Option<f64>,
    pub vacuous_flags: BTreeMap<String, bool>,
    /// Claim-specific extras (per-pair tables, witness vectors, notes).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

fn serialize_opt_extended<S: serde::Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => serialize_extended(v, s),
        None => s.serialize_none(),
    }
}

/// Machine-readable verdict for one claim on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub claim: Claim,
    pub inputs: Inputs,
    pub verdict: Verdict,
    pub evidence: Evidence,
    pub tolerances: BTreeMap<String, f64>,
    pub runtime_ms: u64,
}

impl Report {
    pub(crate) fn new(claim: Claim, inputs: Inputs) -> Self {
        Report {
            claim,
            inputs,
            verdict: Verdict::Inconclusive,
            evidence: Evidence::default(),
            tolerances: BTreeMap::new(),
            runtime_ms: 0,
        }
    }

    pub(crate) fn detail(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.evidence.details.insert(key.to_string(), v);
    }

    pub(crate) fn flag(&mut self, key: &str, value: bool) {
        self.evidence.vacuous_flags.insert(key.to_string(), value);
    }

    pub(crate) fn tolerance(&mut self, key: &str, value: f64) {
        self.tolerances.insert(key.to_string(), value);
    }

    /// JSON without the wall-clock field; identical inputs and seeds give identical bytes.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if let Value::Object(map) = &mut v {
            map.remove("runtime_ms");
        }
        serde_json::to_string(&v).expect("reports serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_combine_by_severity() {
        use Verdict::*;
        assert_eq!(Holds.worst(Holds), Holds);
        assert_eq!(Holds.worst(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.worst(Violated), Violated);
        assert_eq!(HypothesisNotSatisfied.worst(Holds), HypothesisNotSatisfied);
    }

    #[test]
    fn schema_has_stable_keys() {
        let mut r = Report::new(Claim::MainTheorem, Inputs::default());
        r.evidence.bound_rhs = Some(f64::INFINITY);
        r.runtime_ms = 12;
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["claim", "inputs", "verdict", "evidence", "tolerances", "runtime_ms"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        for key in ["graph", "delta", "epsilon", "p", "q", "seed"] {
            assert!(v["inputs"].get(key).is_some(), "{key}");
        }
        for key in ["phi_delta", "witness_set", "norm_lower", "norm_upper", "bound_rhs", "vacuous_flags"] {
            assert!(v["evidence"].get(key).is_some(), "{key}");
        }
        assert_eq!(v["claim"], "main_theorem");
        assert_eq!(v["evidence"]["bound_rhs"], "inf");
        assert!(!r.canonical_json().contains("runtime_ms"));
    }
}
