//! Numerical certification of the link between small-set expansion and
//! hypercontractivity of the top eigenspace of a regular graph.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] builds and validates simple regular graphs and vertex sets.
//! * [`spectral`] holds the normalized adjacency operator, its spectrum,
//!   eigenspace projectors and the `L_p` / `p -> q` norm machinery.
//! * [`expansion`] computes `Φ(S)` exactly and the δ-expansion profile.
//! * [`rounding`] sweeps level sets of score vectors (local Cheeger rounding).
//! * [`theorems`] assembles the pieces into per-claim verdict reports.
//!
//! All norms use the expectation normalization `‖x‖_p = (E_i |x_i|^p)^{1/p}`
//! and the inner product `⟨u, v⟩ = (1/n) Σ u_i v_i`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expansion;
pub mod graph;
pub mod rational;
pub mod rounding;
pub mod spectral;
pub mod theorems;

mod par;

pub use error::{Error, Result};
pub use expansion::{phi, phi_bar, sse_profile, sse_profile_heuristic, ExpansionProfile, ProfileMode};
pub use graph::{density, FamilySpec, Graph, VertexSet};
pub use rational::Exact;
pub use rounding::{lcb_bound_low, round_witness, sweep_high, sweep_low, RoundingResult};
pub use spectral::{
    eigendecompose, holder_dual, inner, lp_norm, normalized_adjacency, pq_norm_lower, pq_norm_upper,
    top_eigenspace, two_to_inf_norm, Exponent, NormEstimate, Projector, Spectrum, SymmetricOperator,
};
pub use theorems::{Report, Verdict};
