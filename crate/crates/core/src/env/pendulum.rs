//! Pendulum swing-up.
//!
//! The standard continuous-control benchmark: a torque-limited pendulum must
//! swing up and balance. Angle is measured from upright, so the reward
//! `-(theta^2 + 0.1 * thetadot^2 + 0.001 * u^2)` peaks at zero when balanced
//! with no torque. There is no terminal state; episodes run to the step
//! limit.
//!
//! This is a single-view environment. It exists to validate the full agent
//! on a known-hard task before the multi-view scenarios add sensor fusion.

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{EnvSpec, Environment, Step};
use crate::obs::Obs;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendulumConfig {
    /// Gravity. Default `10.0`.
    pub gravity: f64,
    /// Pendulum mass. Default `1.0`.
    pub mass: f64,
    /// Pendulum length. Default `1.0`.
    pub length: f64,
    /// Integration step. Default `0.05`.
    pub dt: f64,
    /// Torque magnitude at `|action| = 1`. Default `2.0`.
    pub max_torque: f64,
    /// Angular-velocity clamp. Default `8.0`.
    pub max_speed: f64,
    /// Episode length. Default `200`.
    pub max_steps: usize,
}

impl Default for PendulumConfig {
    fn default() -> Self {
        Self {
            gravity: 10.0,
            mass: 1.0,
            length: 1.0,
            dt: 0.05,
            max_torque: 2.0,
            max_speed: 8.0,
            max_steps: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Pendulum {
    config: PendulumConfig,
    spec: EnvSpec,
    theta: f64,
    theta_dot: f64,
}

/// Wrap an angle into `(-pi, pi]`.
fn angle_normalize(x: f64) -> f64 {
    let wrapped = (x + PI).rem_euclid(2.0 * PI) - PI;
    if wrapped == -PI {
        PI
    } else {
        wrapped
    }
}

impl Pendulum {
    pub fn new(config: PendulumConfig) -> Self {
        Self {
            config,
            spec: EnvSpec {
                num_views: 1,
                view_dim: 3,
                action_dim: 1,
                max_steps: config.max_steps,
            },
            theta: PI,
            theta_dot: 0.0,
        }
    }

    fn obs(&self) -> Obs {
        Obs {
            // Velocity scaled by max_speed so all inputs stay in [-1, 1].
            views: vec![vec![
                self.theta.cos(),
                self.theta.sin(),
                self.theta_dot / self.config.max_speed,
            ]],
            mask: vec![true],
        }
    }

    #[cfg(test)]
    pub(crate) fn set_state(&mut self, theta: f64, theta_dot: f64) {
        self.theta = theta;
        self.theta_dot = theta_dot;
    }

    #[cfg(test)]
    pub(crate) fn state(&self) -> (f64, f64) {
        (self.theta, self.theta_dot)
    }
}

impl Environment for Pendulum {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&mut self, rng: &mut StdRng) -> Obs {
        self.theta = rng.gen_range(-PI..PI);
        self.theta_dot = rng.gen_range(-1.0..1.0);
        self.obs()
    }

    fn step(&mut self, action: &[f64], _rng: &mut StdRng) -> Step {
        assert_eq!(action.len(), 1, "pendulum action dim");
        let c = self.config;
        let u = (action[0] * c.max_torque).clamp(-c.max_torque, c.max_torque);

        let angle = angle_normalize(self.theta);
        let reward = -(angle * angle + 0.1 * self.theta_dot * self.theta_dot + 0.001 * u * u);

        // theta_ddot = 3g/(2l) * sin(theta) + 3/(m l^2) * u
        let accel = 3.0 * c.gravity / (2.0 * c.length) * self.theta.sin()
            + 3.0 / (c.mass * c.length * c.length) * u;
        self.theta_dot = (self.theta_dot + accel * c.dt).clamp(-c.max_speed, c.max_speed);
        self.theta += self.theta_dot * c.dt;

        Step {
            obs: self.obs(),
            reward,
            done: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn angle_normalize_wraps_into_half_open_interval() {
        assert!((angle_normalize(0.0)).abs() < 1e-12);
        assert!((angle_normalize(2.0 * PI)).abs() < 1e-12);
        assert!((angle_normalize(3.0 * PI) - PI).abs() < 1e-12);
        assert!((angle_normalize(-0.1) + 0.1).abs() < 1e-12);
        for k in -5..5 {
            let x = 1.3 + 2.0 * PI * k as f64;
            assert!((angle_normalize(x) - 1.3).abs() < 1e-9);
        }
    }

    #[test]
    fn reward_peaks_balanced_upright() {
        let mut env = Pendulum::new(PendulumConfig::default());
        let mut rng = StdRng::seed_from_u64(0);

        env.set_state(0.0, 0.0);
        let upright = env.step(&[0.0], &mut rng).reward;
        assert!(upright.abs() < 1e-12, "upright reward {upright}");

        env.set_state(PI, 0.0);
        let hanging = env.step(&[0.0], &mut rng).reward;
        assert!(hanging < -9.0, "hanging reward {hanging}");
    }

    #[test]
    fn hanging_rest_is_an_equilibrium() {
        let mut env = Pendulum::new(PendulumConfig::default());
        let mut rng = StdRng::seed_from_u64(0);
        env.set_state(PI, 0.0);
        for _ in 0..50 {
            env.step(&[0.0], &mut rng);
        }
        let (theta, theta_dot) = env.state();
        assert!((angle_normalize(theta).abs() - PI).abs() < 1e-9);
        assert!(theta_dot.abs() < 1e-9);
    }

    #[test]
    fn gravity_pulls_sideways_state_downward() {
        let mut env = Pendulum::new(PendulumConfig::default());
        let mut rng = StdRng::seed_from_u64(0);
        env.set_state(PI / 2.0, 0.0);
        env.step(&[0.0], &mut rng);
        let (theta, theta_dot) = env.state();
        assert!(theta_dot > 0.0, "should accelerate toward hanging");
        assert!(theta > PI / 2.0);
    }

    #[test]
    fn speed_is_clamped() {
        let mut env = Pendulum::new(PendulumConfig::default());
        let mut rng = StdRng::seed_from_u64(0);
        env.set_state(PI / 2.0, 0.0);
        for _ in 0..500 {
            env.step(&[1.0], &mut rng);
            let (_, theta_dot) = env.state();
            assert!(theta_dot.abs() <= 8.0 + 1e-12);
        }
    }

    #[test]
    fn observation_encodes_angle_and_scaled_speed() {
        let mut env = Pendulum::new(PendulumConfig::default());
        env.set_state(1.0, 4.0);
        let obs = env.obs();
        assert!((obs.views[0][0] - 1.0_f64.cos()).abs() < 1e-12);
        assert!((obs.views[0][1] - 1.0_f64.sin()).abs() < 1e-12);
        assert!((obs.views[0][2] - 0.5).abs() < 1e-12);
    }
}
