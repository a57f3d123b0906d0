use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by membership, containment and sampling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Half-width of the `Boundary` band around level zero.
    pub member: f64,
    /// Slack allowed in boundary-graph comparisons.
    pub contain: f64,
    /// Number of random trace-free directions sampled by `contains`.
    pub dirs: usize,
    pub seed: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            member: 1e-9,
            contain: 1e-7,
            dirs: 200,
            seed: 0x6a65_7463,
        }
    }
}
