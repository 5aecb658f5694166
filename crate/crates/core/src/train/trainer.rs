//! Single-thread training loop.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::ddpg::{DdpgAgent, DdpgConfig};
use crate::env::Environment;
use crate::metrics::{mean, std_dev, CsvLogger, EpisodeRecord};
use crate::noise::OuNoise;
use crate::replay::{ReplayBuffer, Transition};
use crate::Result;

/// Training-loop settings, separate from agent hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Environment-step budget; the loop finishes the episode in flight.
    pub total_steps: usize,
    /// Steps collected with uniform random actions before learning starts.
    /// Default `1_000`.
    pub warmup_steps: usize,
    /// Gradient updates per post-warmup environment step. Default `1`.
    pub updates_per_step: usize,
    /// Replay capacity. Default `100_000`.
    pub replay_capacity: usize,
    /// Seed for everything: weights, noise, environment resets, sampling.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            total_steps: 20_000,
            warmup_steps: 1_000,
            updates_per_step: 1,
            replay_capacity: 100_000,
            seed: 0,
        }
    }
}

/// Deterministic-policy evaluation summary.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub episodes: usize,
    pub mean_return: f64,
    pub std_return: f64,
    pub mean_steps: f64,
    /// Mean attention weight per view across all eval steps; empty for the
    /// random baseline.
    pub mean_attention: Vec<f64>,
}

/// Owns one environment, one agent, and everything needed to train them.
pub struct Trainer<E: Environment> {
    env: E,
    agent: DdpgAgent,
    replay: ReplayBuffer,
    noise: OuNoise,
    rng: StdRng,
    config: TrainConfig,
    total_env_steps: usize,
    records: Vec<EpisodeRecord>,
}

impl<E: Environment> Trainer<E> {
    /// Build agent and trainer from one seed.
    pub fn new(env: E, agent_config: DdpgConfig, config: TrainConfig) -> Result<Self> {
        let mut rng = StdRng::seed_from_u64(config.seed);
        let agent = DdpgAgent::new(agent_config, &mut rng)?;
        Ok(Self::with_agent_and_rng(env, agent, config, rng))
    }

    /// Continue with an existing agent, e.g. one restored from a checkpoint.
    pub fn with_agent(env: E, agent: DdpgAgent, config: TrainConfig) -> Self {
        let rng = StdRng::seed_from_u64(config.seed);
        Self::with_agent_and_rng(env, agent, config, rng)
    }

    fn with_agent_and_rng(env: E, agent: DdpgAgent, config: TrainConfig, rng: StdRng) -> Self {
        let noise = OuNoise::new(agent.config().action_dim, agent.config().ou);
        let replay = ReplayBuffer::new(config.replay_capacity);
        Self {
            env,
            agent,
            replay,
            noise,
            rng,
            config,
            total_env_steps: 0,
            records: Vec::new(),
        }
    }

    #[inline]
    pub fn agent(&self) -> &DdpgAgent {
        &self.agent
    }

    #[inline]
    pub fn agent_mut(&mut self) -> &mut DdpgAgent {
        &mut self.agent
    }

    #[inline]
    pub fn env_mut(&mut self) -> &mut E {
        &mut self.env
    }

    #[inline]
    pub fn total_env_steps(&self) -> usize {
        self.total_env_steps
    }

    /// Per-episode records accumulated so far.
    #[inline]
    pub fn records(&self) -> &[EpisodeRecord] {
        &self.records
    }

    /// Train until the step budget is spent; returns the episode records.
    pub fn run(&mut self) -> &[EpisodeRecord] {
        while self.total_env_steps < self.config.total_steps {
            self.run_episode();
        }
        &self.records
    }

    fn run_episode(&mut self) {
        let max_steps = self.env.spec().max_steps;
        let action_dim = self.agent.config().action_dim;
        let batch_size = self.agent.config().batch_size;

        let mut obs = self.env.reset(&mut self.rng);
        self.noise.reset();

        let mut ret = 0.0;
        let mut steps = 0;
        let mut critic_losses = Vec::new();
        let mut actor_losses = Vec::new();
        let mut entropies = Vec::new();

        for _ in 0..max_steps {
            let action = if self.total_env_steps < self.config.warmup_steps {
                (0..action_dim)
                    .map(|_| self.rng.gen_range(-1.0..1.0))
                    .collect()
            } else {
                self.agent.act_explore(&obs, &mut self.noise, &mut self.rng)
            };

            let step = self.env.step(&action, &mut self.rng);
            self.replay.push(Transition {
                obs,
                action,
                reward: step.reward,
                // `done` is terminal-only; a time-limit cut below stores the
                // transition as non-terminal so bootstrapping stays valid.
                next_obs: step.obs.clone(),
                done: step.done,
            });
            obs = step.obs;
            ret += step.reward;
            steps += 1;
            self.total_env_steps += 1;

            if self.total_env_steps >= self.config.warmup_steps && self.replay.len() >= batch_size {
                for _ in 0..self.config.updates_per_step {
                    let stats = self.agent.train_step(&self.replay, &mut self.rng);
                    critic_losses.push(stats.critic_loss);
                    actor_losses.push(stats.actor_loss);
                    entropies.push(stats.attn_entropy);
                }
            }

            if step.done {
                break;
            }
        }

        self.records.push(EpisodeRecord {
            episode: self.records.len(),
            steps,
            total_env_steps: self.total_env_steps,
            ret,
            critic_loss: mean(&critic_losses),
            actor_loss: mean(&actor_losses),
            attn_entropy: mean(&entropies),
        });
    }

    /// Run the deterministic policy for `episodes` episodes.
    pub fn evaluate(&mut self, episodes: usize) -> EvalReport {
        let num_views = self.env.spec().num_views;
        let max_steps = self.env.spec().max_steps;

        let mut returns = Vec::with_capacity(episodes);
        let mut step_counts = Vec::with_capacity(episodes);
        let mut attention_sum = vec![0.0; num_views];
        let mut attention_steps = 0usize;

        for _ in 0..episodes {
            let mut obs = self.env.reset(&mut self.rng);
            let mut ret = 0.0;
            let mut steps = 0;
            for _ in 0..max_steps {
                let action = self.agent.act(&obs);
                for (s, &w) in attention_sum.iter_mut().zip(self.agent.last_attention()) {
                    *s += w;
                }
                attention_steps += 1;

                let step = self.env.step(&action, &mut self.rng);
                obs = step.obs;
                ret += step.reward;
                steps += 1;
                if step.done {
                    break;
                }
            }
            returns.push(ret);
            step_counts.push(steps as f64);
        }

        for s in &mut attention_sum {
            *s /= attention_steps.max(1) as f64;
        }
        EvalReport {
            episodes,
            mean_return: mean(&returns),
            std_return: std_dev(&returns),
            mean_steps: mean(&step_counts),
            mean_attention: attention_sum,
        }
    }

    /// Uniform-random-policy baseline under the same protocol as
    /// [`Trainer::evaluate`].
    pub fn evaluate_random(&mut self, episodes: usize) -> EvalReport {
        let action_dim = self.agent.config().action_dim;
        let max_steps = self.env.spec().max_steps;

        let mut returns = Vec::with_capacity(episodes);
        let mut step_counts = Vec::with_capacity(episodes);
        for _ in 0..episodes {
            self.env.reset(&mut self.rng);
            let mut ret = 0.0;
            let mut steps = 0;
            for _ in 0..max_steps {
                let action: Vec<f64> = (0..action_dim)
                    .map(|_| self.rng.gen_range(-1.0..1.0))
                    .collect();
                let step = self.env.step(&action, &mut self.rng);
                ret += step.reward;
                steps += 1;
                if step.done {
                    break;
                }
            }
            returns.push(ret);
            step_counts.push(steps as f64);
        }
        EvalReport {
            episodes,
            mean_return: mean(&returns),
            std_return: std_dev(&returns),
            mean_steps: mean(&step_counts),
            mean_attention: Vec::new(),
        }
    }

    /// Write the accumulated episode records as CSV.
    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut logger = CsvLogger::create(path)?;
        for r in &self.records {
            logger.log(r)?;
        }
        logger.flush()
    }
}
