//! Reward shaping.
//!
//! Environments report a base task reward; training quality usually improves
//! with two standard additions:
//!
//! - Potential-based shaping `F(s, s') = gamma * phi(s') - phi(s)`, which
//!   telescopes over an episode and therefore preserves the optimal policy.
//! - Penalty terms for control effort, boundary violations, and elapsed
//!   steps, which do change the objective and are kept separate so their
//!   contribution stays auditable.

use serde::{Deserialize, Serialize};

/// Weights for the non-potential penalty terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyConfig {
    /// Multiplies `||action||^2`. Default `0.0`.
    pub control_weight: f64,
    /// Charged once per step where the environment flags a boundary
    /// violation. Default `0.0`.
    pub boundary_weight: f64,
    /// Flat per-step cost, encouraging shorter episodes. Default `0.0`.
    pub step_cost: f64,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            control_weight: 0.0,
            boundary_weight: 0.0,
            step_cost: 0.0,
        }
    }
}

/// A shaped reward, split into its ingredients. `total` is what training
/// consumes; the rest exists for logging and tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub base: f64,
    pub shaping: f64,
    pub control_penalty: f64,
    pub boundary_penalty: f64,
    pub step_cost: f64,
    pub total: f64,
}

/// Potential-based shaping term `gamma * phi(s') - phi(s)`.
#[inline]
pub fn potential_shaping(gamma: f64, phi_s: f64, phi_next: f64) -> f64 {
    gamma * phi_next - phi_s
}

/// Combines a base reward with shaping and penalties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardShaper {
    pub gamma: f64,
    pub penalties: PenaltyConfig,
}

impl RewardShaper {
    pub fn new(gamma: f64, penalties: PenaltyConfig) -> Self {
        Self { gamma, penalties }
    }

    /// Shape one step.
    ///
    /// `phi_s` and `phi_next` are the potential at the current and next
    /// state; `boundary_violation` flags steps the environment considers out
    /// of bounds.
    pub fn shape(
        &self,
        base: f64,
        phi_s: f64,
        phi_next: f64,
        action: &[f64],
        boundary_violation: bool,
    ) -> RewardBreakdown {
        let shaping = potential_shaping(self.gamma, phi_s, phi_next);
        let control_penalty =
            -self.penalties.control_weight * action.iter().map(|a| a * a).sum::<f64>();
        let boundary_penalty = if boundary_violation {
            -self.penalties.boundary_weight
        } else {
            0.0
        };
        let step_cost = -self.penalties.step_cost;
        RewardBreakdown {
            base,
            shaping,
            control_penalty,
            boundary_penalty,
            step_cost,
            total: base + shaping + control_penalty + boundary_penalty + step_cost,
        }
    }
}
