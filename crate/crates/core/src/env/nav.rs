//! Multi-view point navigation.
//!
//! A point mass accelerates toward a goal in the unit box. Every sensor view
//! reports the same underlying state, `[px, py, gx - px, gy - py]`, but each
//! through its own noise level, and one view can be configured as faulty so
//! it carries no information at all. Attention fusion should learn to lean
//! on the clean sensors and discount the faulty one.
//!
//! The reward is potential-shaped on goal distance, with optional control,
//! boundary, and step penalties; reaching the goal pays a terminal bonus.

use rand::rngs::StdRng;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{EnvSpec, Environment, Step};
use crate::obs::Obs;
use crate::reward::{PenaltyConfig, RewardBreakdown, RewardShaper};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NavConfig {
    /// Integration step. Default `0.1`.
    pub dt: f64,
    /// Velocity damping per unit time. Default `1.0`.
    pub drag: f64,
    /// Acceleration at `|action| = 1`. Default `1.0`.
    pub accel: f64,
    /// Goal capture radius. Default `0.1`.
    pub goal_radius: f64,
    /// Terminal bonus for reaching the goal. Default `10.0`.
    pub reach_bonus: f64,
    /// Per-view Gaussian sensor noise; length fixes the view count.
    /// Default `[0.01, 0.05, 0.1]`.
    pub view_noise: Vec<f64>,
    /// A view that reports uniform garbage instead of state. Default `None`.
    pub faulty_view: Option<usize>,
    /// Per-step, per-view dropout probability. Default `0.0`.
    pub dropout_prob: f64,
    /// Discount used by the shaping term. Default `0.99`.
    pub gamma: f64,
    /// Scale of the potential `phi = -scale * dist`. Default `1.0`.
    pub potential_scale: f64,
    pub penalties: PenaltyConfig,
    /// Episode length. Default `100`.
    pub max_steps: usize,
}

impl Default for NavConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            drag: 1.0,
            accel: 1.0,
            goal_radius: 0.1,
            reach_bonus: 10.0,
            view_noise: vec![0.01, 0.05, 0.1],
            faulty_view: None,
            dropout_prob: 0.0,
            gamma: 0.99,
            potential_scale: 1.0,
            penalties: PenaltyConfig {
                control_weight: 0.01,
                boundary_weight: 0.5,
                step_cost: 0.01,
            },
            max_steps: 100,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Nav {
    config: NavConfig,
    spec: EnvSpec,
    shaper: RewardShaper,
    pos: [f64; 2],
    vel: [f64; 2],
    goal: [f64; 2],
    last_breakdown: Option<RewardBreakdown>,
}

impl Nav {
    pub fn new(config: NavConfig) -> Self {
        assert!(!config.view_noise.is_empty(), "need at least one view");
        if let Some(f) = config.faulty_view {
            assert!(f < config.view_noise.len(), "faulty view out of range");
        }
        let spec = EnvSpec {
            num_views: config.view_noise.len(),
            view_dim: 4,
            action_dim: 2,
            max_steps: config.max_steps,
        };
        let shaper = RewardShaper::new(config.gamma, config.penalties);
        Self {
            config,
            spec,
            shaper,
            pos: [0.0; 2],
            vel: [0.0; 2],
            goal: [0.5; 2],
            last_breakdown: None,
        }
    }

    pub fn distance_to_goal(&self) -> f64 {
        let dx = self.goal[0] - self.pos[0];
        let dy = self.goal[1] - self.pos[1];
        (dx * dx + dy * dy).sqrt()
    }

    /// Reward ingredients of the most recent step.
    pub fn last_breakdown(&self) -> Option<&RewardBreakdown> {
        self.last_breakdown.as_ref()
    }

    fn potential(&self) -> f64 {
        -self.config.potential_scale * self.distance_to_goal()
    }

    fn observe(&self, rng: &mut StdRng) -> Obs {
        let k = self.spec.num_views;
        let mut views = Vec::with_capacity(k);
        let mut mask = vec![true; k];

        for v in 0..k {
            if self.config.faulty_view == Some(v) {
                // Garbage sensor: right shape, zero information.
                views.push((0..4).map(|_| rng.gen_range(-1.0..1.0)).collect());
                continue;
            }
            let sigma = self.config.view_noise[v];
            let truth = [
                self.pos[0],
                self.pos[1],
                self.goal[0] - self.pos[0],
                self.goal[1] - self.pos[1],
            ];
            views.push(
                truth
                    .iter()
                    .map(|&x| x + sigma * rng.sample::<f64, _>(rand_distr::StandardNormal))
                    .collect(),
            );
        }

        if self.config.dropout_prob > 0.0 {
            for m in mask.iter_mut() {
                *m = !rng.gen_bool(self.config.dropout_prob);
            }
            if mask.iter().all(|&m| !m) {
                mask[0] = true;
            }
        }

        Obs { views, mask }
    }

    #[cfg(test)]
    pub(crate) fn set_state(&mut self, pos: [f64; 2], vel: [f64; 2], goal: [f64; 2]) {
        self.pos = pos;
        self.vel = vel;
        self.goal = goal;
    }

    #[cfg(test)]
    pub(crate) fn pos(&self) -> [f64; 2] {
        self.pos
    }
}

impl Environment for Nav {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&mut self, rng: &mut StdRng) -> Obs {
        self.goal = [rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)];
        // Spawn far enough from the goal that every episode requires travel.
        loop {
            self.pos = [rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)];
            if self.distance_to_goal() >= 0.5 {
                break;
            }
        }
        self.vel = [0.0; 2];
        self.last_breakdown = None;
        self.observe(rng)
    }

    fn step(&mut self, action: &[f64], rng: &mut StdRng) -> Step {
        assert_eq!(action.len(), 2, "nav action dim");
        let c = &self.config;
        let phi_s = self.potential();

        let mut boundary = false;
        for d in 0..2 {
            let a = action[d].clamp(-1.0, 1.0) * c.accel;
            self.vel[d] += (a - c.drag * self.vel[d]) * c.dt;
            self.pos[d] += self.vel[d] * c.dt;
            if self.pos[d].abs() > 1.0 {
                self.pos[d] = self.pos[d].clamp(-1.0, 1.0);
                self.vel[d] = 0.0;
                boundary = true;
            }
        }

        let reached = self.distance_to_goal() < c.goal_radius;
        let base = if reached { c.reach_bonus } else { 0.0 };
        let breakdown = self
            .shaper
            .shape(base, phi_s, self.potential(), action, boundary);
        self.last_breakdown = Some(breakdown);

        Step {
            obs: self.observe(rng),
            reward: breakdown.total,
            done: reached,
        }
    }
}
