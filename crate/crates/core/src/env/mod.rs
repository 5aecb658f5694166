//! Simulation environments.
//!
//! Everything the agent trains against implements [`Environment`]. Actions
//! arrive in the normalized `[-1, 1]` policy range; each environment scales
//! them to physical units internally. `done` means a genuine terminal state;
//! running out of `max_steps` is a truncation the training loop handles
//! separately so bootstrapping stays correct.

mod nav;
mod pendulum;
mod probe;

pub use nav::{Nav, NavConfig};
pub use pendulum::{Pendulum, PendulumConfig};
pub use probe::{ActionProbe, ObsProbe, ValueProbe};

use rand::rngs::StdRng;

use crate::obs::Obs;

/// Static shape information about an environment.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvSpec {
    pub num_views: usize,
    pub view_dim: usize,
    pub action_dim: usize,
    /// Episodes are truncated after this many steps.
    pub max_steps: usize,
}

/// Result of one environment step.
#[derive(Debug, Clone)]
pub struct Step {
    pub obs: Obs,
    pub reward: f64,
    /// True only for genuine terminal states, never for time limits.
    pub done: bool,
}

pub trait Environment: Send {
    fn spec(&self) -> &EnvSpec;

    /// Start a new episode and return its first observation.
    fn reset(&mut self, rng: &mut StdRng) -> Obs;

    /// Apply a normalized action in `[-1, 1]^action_dim`.
    fn step(&mut self, action: &[f64], rng: &mut StdRng) -> Step;
}

impl Environment for Box<dyn Environment> {
    fn spec(&self) -> &EnvSpec {
        (**self).spec()
    }

    fn reset(&mut self, rng: &mut StdRng) -> Obs {
        (**self).reset(rng)
    }

    fn step(&mut self, action: &[f64], rng: &mut StdRng) -> Step {
        (**self).step(action, rng)
    }
}
