//! Probe environments.
//!
//! Each probe isolates one part of the learning machinery, so a failure
//! points at a specific defect instead of "training did not work":
//!
//! - [`ValueProbe`]: constant observation, constant reward, one-step
//!   episodes. The critic must learn a constant; nothing else matters.
//! - [`ActionProbe`]: constant observation, reward depends only on the
//!   action. Exercises the actor update through the critic.
//! - [`ObsProbe`]: the reward equals a value visible in the observation.
//!   The critic must actually read its inputs.

use rand::rngs::StdRng;
use rand::Rng;

use super::{EnvSpec, Environment, Step};
use crate::obs::Obs;

fn one_step_spec(num_views: usize, view_dim: usize, action_dim: usize) -> EnvSpec {
    EnvSpec {
        num_views,
        view_dim,
        action_dim,
        max_steps: 1,
    }
}

/// Constant observation, reward `1.0`, episode ends immediately.
/// Optimal Q is exactly `1.0` everywhere.
#[derive(Debug, Clone)]
pub struct ValueProbe {
    spec: EnvSpec,
}

impl ValueProbe {
    pub fn new() -> Self {
        Self {
            spec: one_step_spec(2, 1, 1),
        }
    }
}

impl Default for ValueProbe {
    fn default() -> Self {
        Self::new()
    }
}

impl Environment for ValueProbe {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&mut self, _rng: &mut StdRng) -> Obs {
        Obs::zeros(2, 1)
    }

    fn step(&mut self, action: &[f64], _rng: &mut StdRng) -> Step {
        assert_eq!(action.len(), 1);
        Step {
            obs: Obs::zeros(2, 1),
            reward: 1.0,
            done: true,
        }
    }
}

/// Constant observation; reward `1 - (a - target)^2` for scalar action `a`.
/// A correct actor update drives the policy toward `target`.
#[derive(Debug, Clone)]
pub struct ActionProbe {
    spec: EnvSpec,
    pub target: f64,
}

impl ActionProbe {
    pub fn new() -> Self {
        Self {
            spec: one_step_spec(2, 1, 1),
            target: 0.5,
        }
    }
}

impl Default for ActionProbe {
    fn default() -> Self {
        Self::new()
    }
}

impl Environment for ActionProbe {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&mut self, _rng: &mut StdRng) -> Obs {
        Obs::zeros(2, 1)
    }

    fn step(&mut self, action: &[f64], _rng: &mut StdRng) -> Step {
        assert_eq!(action.len(), 1);
        let d = action[0] - self.target;
        Step {
            obs: Obs::zeros(2, 1),
            reward: 1.0 - d * d,
            done: true,
        }
    }
}

/// The observation carries `+1` or `-1` in every view; the reward equals
/// that value. Optimal Q is the observed value, so a critic that ignores
/// its inputs cannot fit this.
#[derive(Debug, Clone)]
pub struct ObsProbe {
    spec: EnvSpec,
    value: f64,
}

impl ObsProbe {
    pub fn new() -> Self {
        Self {
            spec: one_step_spec(2, 1, 1),
            value: 1.0,
        }
    }

    fn obs(&self) -> Obs {
        Obs {
            views: vec![vec![self.value]; 2],
            mask: vec![true; 2],
        }
    }
}

impl Default for ObsProbe {
    fn default() -> Self {
        Self::new()
    }
}

impl Environment for ObsProbe {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&mut self, rng: &mut StdRng) -> Obs {
        self.value = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        self.obs()
    }

    fn step(&mut self, action: &[f64], _rng: &mut StdRng) -> Step {
        assert_eq!(action.len(), 1);
        Step {
            obs: self.obs(),
            reward: self.value,
            done: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn value_probe_pays_one() {
        let mut env = ValueProbe::new();
        let mut rng = StdRng::seed_from_u64(0);
        env.reset(&mut rng);
        let step = env.step(&[0.3], &mut rng);
        assert_eq!(step.reward, 1.0);
        assert!(step.done);
    }

    #[test]
    fn action_probe_peaks_at_target() {
        let mut env = ActionProbe::new();
        let mut rng = StdRng::seed_from_u64(0);
        env.reset(&mut rng);
        let at_target = env.step(&[0.5], &mut rng).reward;
        let off_target = env.step(&[-0.5], &mut rng).reward;
        assert_eq!(at_target, 1.0);
        assert!(off_target < at_target);
    }

    #[test]
    fn obs_probe_reward_matches_observation() {
        let mut env = ObsProbe::new();
        let mut rng = StdRng::seed_from_u64(3);
        let mut seen = [false, false];
        for _ in 0..50 {
            let obs = env.reset(&mut rng);
            let step = env.step(&[0.0], &mut rng);
            assert_eq!(step.reward, obs.views[0][0]);
            assert_eq!(obs.views[0][0], obs.views[1][0]);
            seen[(step.reward > 0.0) as usize] = true;
        }
        assert!(seen[0] && seen[1], "both signs should occur");
    }
}
