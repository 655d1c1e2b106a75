//! Normalized adjacency, spectra, eigenspace projectors, and norm machinery.

pub(crate) mod norms;
mod operator;
pub(crate) mod pq;
mod projector;

pub use norms::{holder_dual, inner, lp_norm, Exponent};
pub use operator::{eigendecompose, normalized_adjacency, Spectrum, SymmetricOperator};
pub use pq::{pq_norm_lower, pq_norm_lower_matrix, pq_norm_upper, ratio, AscentConfig, NormEstimate};
pub use projector::{top_eigenspace, two_to_inf_norm, Projector};

/// Slack below a threshold within which an eigenvalue still counts as `>= λ`.
pub const THRESHOLD_SLACK: f64 = 1e-9;
