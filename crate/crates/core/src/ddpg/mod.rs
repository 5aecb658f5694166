//! Deterministic actor-critic agent over fused multi-view observations.
//!
//! The agent holds four networks: actor, critic, and a slowly tracking
//! target copy of each. One [`DdpgAgent::train_step`] does, in order:
//!
//! 1. Critic regression toward the bootstrap target
//!    `y = r + gamma * (1 - done) * Q'(s', mu'(s'))`.
//! 2. Actor ascent on `Q(s, mu(s))`: the critic is differentiated with
//!    respect to its action input, and that gradient is pushed back through
//!    the actor. The critic's own parameters are not updated in this phase.
//! 3. Soft target updates `theta' <- tau * theta + (1 - tau) * theta'`.

mod actor;
mod critic;

pub use actor::{Actor, ActorGrads, ActorScratch};
pub use critic::{Critic, CriticGrads, CriticScratch};

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fusion::{attention_entropy, FusionSpec};
use crate::nn::Adam;
use crate::noise::{OuConfig, OuNoise};
use crate::obs::Obs;
use crate::replay::ReplayBuffer;
use crate::Result;

/// Agent hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DdpgConfig {
    /// Shape of the fusion front end (actor and critic each get their own).
    pub fusion: FusionSpec,
    /// Hidden widths of the policy head. Default `[64]`.
    pub actor_hidden: Vec<usize>,
    /// Hidden widths of the value head. Default `[64]`.
    pub critic_hidden: Vec<usize>,
    pub action_dim: usize,
    /// Discount factor. Default `0.99`.
    pub gamma: f64,
    /// Target tracking rate. Default `0.005`.
    pub tau: f64,
    /// Actor Adam step size. Default `1e-4`.
    pub actor_lr: f64,
    /// Critic Adam step size. Default `1e-3`.
    pub critic_lr: f64,
    /// Transitions per update. Default `64`.
    pub batch_size: usize,
    /// Optional global gradient-norm clip, applied per network.
    pub grad_clip: Option<f64>,
    /// Exploration noise parameters.
    pub ou: OuConfig,
}

impl DdpgConfig {
    /// Conventional defaults for an environment with the given shape.
    pub fn for_shape(num_views: usize, view_dim: usize, action_dim: usize) -> Self {
        Self {
            fusion: FusionSpec {
                num_views,
                view_dim,
                feature_dim: 16,
                encoder_hidden: vec![32],
                score_hidden: 16,
            },
            actor_hidden: vec![64],
            critic_hidden: vec![64],
            action_dim,
            gamma: 0.99,
            tau: 0.005,
            actor_lr: 1e-4,
            critic_lr: 1e-3,
            batch_size: 64,
            grad_clip: None,
            ou: OuConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.fusion.validate()?;
        let bad = |msg: &str| Err(crate::Error::InvalidConfig(msg.to_owned()));
        if self.action_dim == 0 {
            return bad("action_dim must be > 0");
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return bad("gamma must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return bad("tau must lie in [0, 1]");
        }
        if self.actor_lr <= 0.0 || self.critic_lr <= 0.0 {
            return bad("learning rates must be > 0");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be > 0");
        }
        Ok(())
    }
}

/// Losses and diagnostics from one [`DdpgAgent::train_step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateStats {
    /// Mean squared TD error over the batch.
    pub critic_loss: f64,
    /// `-mean Q(s, mu(s))` over the batch.
    pub actor_loss: f64,
    /// Mean actor attention entropy over the batch, in nats.
    pub attn_entropy: f64,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    config: DdpgConfig,
    actor: Actor,
    actor_target: Actor,
    critic: Critic,
    critic_target: Critic,
}

/// The full agent: four networks, two optimizers, reusable workspaces.
pub struct DdpgAgent {
    config: DdpgConfig,
    actor: Actor,
    actor_target: Actor,
    critic: Critic,
    critic_target: Critic,
    actor_opt: Adam,
    critic_opt: Adam,
    actor_scratch: ActorScratch,
    actor_target_scratch: ActorScratch,
    critic_scratch: CriticScratch,
    critic_target_scratch: CriticScratch,
    actor_grads: ActorGrads,
    critic_grads: CriticGrads,
    d_action: Vec<f64>,
}

impl DdpgAgent {
    pub fn new<R: Rng + ?Sized>(config: DdpgConfig, rng: &mut R) -> Result<Self> {
        config.validate()?;
        let actor = Actor::new(
            config.fusion.clone(),
            &config.actor_hidden,
            config.action_dim,
            rng,
        );
        let critic = Critic::new(
            config.fusion.clone(),
            &config.critic_hidden,
            config.action_dim,
            rng,
        );
        // Targets start as exact copies of the mains.
        let actor_target = actor.clone();
        let critic_target = critic.clone();
        Ok(Self::assemble(
            config,
            actor,
            actor_target,
            critic,
            critic_target,
        ))
    }

    fn assemble(
        config: DdpgConfig,
        actor: Actor,
        actor_target: Actor,
        critic: Critic,
        critic_target: Critic,
    ) -> Self {
        let actor_scratch = ActorScratch::new(&actor);
        let actor_target_scratch = ActorScratch::new(&actor_target);
        let critic_scratch = CriticScratch::new(&critic);
        let critic_target_scratch = CriticScratch::new(&critic_target);
        let actor_grads = ActorGrads::zeroed(&actor);
        let critic_grads = CriticGrads::zeroed(&critic);
        let d_action = vec![0.0; config.action_dim];
        Self {
            actor_opt: Adam::new(config.actor_lr),
            critic_opt: Adam::new(config.critic_lr),
            config,
            actor,
            actor_target,
            critic,
            critic_target,
            actor_scratch,
            actor_target_scratch,
            critic_scratch,
            critic_target_scratch,
            actor_grads,
            critic_grads,
            d_action,
        }
    }

    #[inline]
    pub fn config(&self) -> &DdpgConfig {
        &self.config
    }

    pub fn num_params(&self) -> usize {
        self.actor.num_params() + self.critic.num_params()
    }

    /// Read-only view of the online policy, e.g. for snapshotting.
    #[inline]
    pub fn actor(&self) -> &Actor {
        &self.actor
    }

    /// Deterministic policy action in `[-1, 1]^action_dim`.
    pub fn act(&mut self, obs: &Obs) -> Vec<f64> {
        self.actor.forward(obs, &mut self.actor_scratch).to_vec()
    }

    /// Policy action plus OU noise, clamped back into `[-1, 1]`.
    pub fn act_explore<R: Rng + ?Sized>(
        &mut self,
        obs: &Obs,
        noise: &mut OuNoise,
        rng: &mut R,
    ) -> Vec<f64> {
        let mut action = self.act(obs);
        for (a, &n) in action.iter_mut().zip(noise.sample(rng)) {
            *a = (*a + n).clamp(-1.0, 1.0);
        }
        action
    }

    /// Actor attention weights from the latest `act`.
    pub fn last_attention(&self) -> &[f64] {
        self.actor_scratch.attention_weights()
    }

    /// Q-value under the current critic.
    pub fn q_value(&mut self, obs: &Obs, action: &[f64]) -> f64 {
        self.critic.forward(obs, action, &mut self.critic_scratch)
    }

    /// One gradient update on a uniform batch from `replay`.
    pub fn train_step<R: Rng + ?Sized>(
        &mut self,
        replay: &ReplayBuffer,
        rng: &mut R,
    ) -> UpdateStats {
        let batch = replay.sample(rng, self.config.batch_size);
        let b = batch.len() as f64;

        // Critic phase: regress Q(s, a) onto r + gamma * (1 - done) * Q'(s', mu'(s')).
        self.critic_grads.zero();
        let mut critic_loss = 0.0;
        for t in &batch {
            let next_action = self
                .actor_target
                .forward(&t.next_obs, &mut self.actor_target_scratch);
            let q_next = self.critic_target.forward(
                &t.next_obs,
                next_action,
                &mut self.critic_target_scratch,
            );
            let y = t.reward + self.config.gamma * if t.done { 0.0 } else { q_next };

            let q = self
                .critic
                .forward(&t.obs, &t.action, &mut self.critic_scratch);
            let err = q - y;
            critic_loss += err * err / b;
            self.critic.backward(
                &t.obs,
                &mut self.critic_scratch,
                2.0 * err / b,
                &mut self.critic_grads,
                None,
            );
        }
        clip_grad_norm(&mut self.critic_grads, self.config.grad_clip);
        self.critic_opt
            .step(&mut self.critic.param_grad_pairs(&self.critic_grads));

        // Actor phase: ascend Q(s, mu(s)). The upstream gradient -1/B turns
        // the critic's action-input gradient into d(actor loss)/d(action);
        // critic parameter gradients from this pass are discarded.
        self.actor_grads.zero();
        self.critic_grads.zero();
        let mut actor_loss = 0.0;
        let mut entropy = 0.0;
        for t in &batch {
            let action = self.actor.forward(&t.obs, &mut self.actor_scratch);
            let q = self
                .critic
                .forward(&t.obs, action, &mut self.critic_scratch);
            actor_loss -= q / b;
            entropy += attention_entropy(self.actor_scratch.attention_weights()) / b;

            self.critic.backward(
                &t.obs,
                &mut self.critic_scratch,
                -1.0 / b,
                &mut self.critic_grads,
                Some(&mut self.d_action),
            );
            self.actor.backward(
                &t.obs,
                &mut self.actor_scratch,
                &self.d_action,
                &mut self.actor_grads,
            );
        }
        clip_grad_norm_actor(&mut self.actor_grads, self.config.grad_clip);
        self.actor_opt
            .step(&mut self.actor.param_grad_pairs(&self.actor_grads));

        // Target phase.
        self.actor_target
            .soft_update_from(&self.actor, self.config.tau);
        self.critic_target
            .soft_update_from(&self.critic, self.config.tau);

        UpdateStats {
            critic_loss,
            actor_loss,
            attn_entropy: entropy,
        }
    }

    /// Write networks and config as JSON. Optimizer moments are not part of
    /// a checkpoint; loading is for evaluation or fresh fine-tuning.
    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let checkpoint = Checkpoint {
            config: self.config.clone(),
            actor: self.actor.clone(),
            actor_target: self.actor_target.clone(),
            critic: self.critic.clone(),
            critic_target: self.critic_target.clone(),
        };
        serde_json::to_writer(BufWriter::new(File::create(path)?), &checkpoint)?;
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        let checkpoint: Checkpoint = serde_json::from_reader(BufReader::new(File::open(path)?))?;
        checkpoint.config.validate()?;
        Ok(Self::assemble(
            checkpoint.config,
            checkpoint.actor,
            checkpoint.actor_target,
            checkpoint.critic,
            checkpoint.critic_target,
        ))
    }
}

fn clip_grad_norm(grads: &mut CriticGrads, max: Option<f64>) {
    if let Some(max) = max {
        let norm = grads.norm_sq().sqrt();
        if norm > max {
            grads.scale(max / norm);
        }
    }
}

fn clip_grad_norm_actor(grads: &mut ActorGrads, max: Option<f64>) {
    if let Some(max) = max {
        let norm = grads.norm_sq().sqrt();
        if norm > max {
            grads.scale(max / norm);
        }
    }
}
