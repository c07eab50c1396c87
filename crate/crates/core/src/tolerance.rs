use serde::{Deserialize, Serialize};

/// Numeric tolerance knobs used across the toolkit.
///
/// Model magnitudes stay below ~1e5 (quantities) and ~1e8 (money), so the
/// absolute tolerances below are far above round-off yet far below any
/// economically meaningful difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Primal and dual feasibility residuals (absolute).
    pub feas: f64,
    /// Primal/dual objective gap (relative to `1 + |z|`).
    pub gap: f64,
    /// Basic variables at or below this value count as degenerate.
    pub deg: f64,
    /// Classification boundary margin (relative).
    pub bound: f64,
    /// Complementary slackness residual (termwise normalized).
    pub cs: f64,
    /// Profit threshold for the cost-recovery verdict (absolute).
    pub money: f64,
    /// Price agreement between analytic and LP routes (absolute).
    pub price: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feas: 1e-9,
            gap: 1e-8,
            deg: 1e-9,
            bound: 1e-9,
            cs: 1e-7,
            money: 1e-6,
            price: 1e-6,
        }
    }
}
