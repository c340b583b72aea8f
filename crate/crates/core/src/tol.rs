use serde::{Deserialize, Serialize};

/// Numerical thresholds used throughout the crate.
///
/// `tau_sep` decides when two locations count as the same point,
/// `tau_cluster` (scaled by `max(1, max|root|)`) merges root approximations
/// unconditionally, and `multiplicity_backward_error` admits larger clusters
/// when the polynomial is that close to one with a multiple root at the
/// cluster centroid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub tau_sep: f64,
    pub tau_cluster: f64,
    pub multiplicity_backward_error: f64,
    pub rank_threshold: f64,
    pub max_degree: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tau_sep: 1e-7,
            tau_cluster: 1e-8,
            multiplicity_backward_error: 1e-12,
            rank_threshold: 1e-10,
            max_degree: 64,
        }
    }
}
