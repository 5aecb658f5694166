//! Parallel collection with a central learner.
//!
//! Worker threads run environments against a shared policy snapshot and
//! stream transitions over a bounded channel; the calling thread owns the
//! agent, pushes into replay, runs gradient updates, and republishes the
//! policy. Collection order depends on thread scheduling, so parallel runs
//! are not bitwise reproducible; the single-thread [`Trainer`] is the
//! reference path when determinism matters.
//!
//! [`Trainer`]: crate::train::Trainer

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::sync::{Arc, RwLock};
use std::thread;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::ddpg::{ActorScratch, DdpgAgent};
use crate::env::Environment;
use crate::noise::OuNoise;
use crate::replay::{ReplayBuffer, Transition};
use crate::Result;

/// Bounded channel so fast workers throttle instead of buffering unboundedly.
const CHANNEL_CAPACITY: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelConfig {
    /// Collector threads. Default `4`.
    pub workers: usize,
    /// Total environment steps across all workers.
    pub total_steps: usize,
    /// Steps collected with uniform random actions before learning.
    /// Default `1_000`.
    pub warmup_steps: usize,
    /// Gradient updates per received transition after warmup. Default `1`.
    pub updates_per_transition: usize,
    /// Replay capacity. Default `100_000`.
    pub replay_capacity: usize,
    /// Updates between policy-snapshot publications. Default `10`.
    pub publish_every: usize,
    pub seed: u64,
}

impl Default for ParallelConfig {
    fn default() -> Self {
        Self {
            workers: 4,
            total_steps: 20_000,
            warmup_steps: 1_000,
            updates_per_transition: 1,
            replay_capacity: 100_000,
            publish_every: 10,
            seed: 0,
        }
    }
}

/// One completed worker episode, in arrival order at the learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerEpisode {
    pub worker: usize,
    pub ret: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParallelReport {
    pub episodes: Vec<WorkerEpisode>,
    /// Transitions received by the learner; equals the step budget.
    pub transitions: usize,
    /// Gradient updates performed.
    pub updates: usize,
}

enum Msg {
    Step(Transition),
    Episode(WorkerEpisode),
}

/// Train `agent` on environments built by `env_factory`, one per worker.
///
/// The factory receives the worker index, so workers can get identical or
/// deliberately different environments. Partial episodes in flight when the
/// budget runs out are dropped from the episode list (their transitions are
/// still learned from).
pub fn train_parallel<E, F>(
    agent: &mut DdpgAgent,
    env_factory: F,
    config: &ParallelConfig,
) -> Result<ParallelReport>
where
    E: Environment,
    F: Fn(usize) -> E + Sync,
{
    assert!(config.workers > 0, "need at least one worker");
    agent.config().validate()?;

    let action_dim = agent.config().action_dim;
    let ou = agent.config().ou;
    let batch_size = agent.config().batch_size;
    let policy = Arc::new(RwLock::new(agent.actor().clone()));
    let claimed = AtomicUsize::new(0);

    let mut replay = ReplayBuffer::new(config.replay_capacity);
    let mut learner_rng = StdRng::seed_from_u64(config.seed);
    let mut episodes = Vec::new();
    let mut transitions = 0usize;
    let mut updates = 0usize;

    thread::scope(|scope| {
        let (tx, rx) = mpsc::sync_channel::<Msg>(CHANNEL_CAPACITY);
        let factory = &env_factory;
        let claimed = &claimed;

        for w in 0..config.workers {
            let tx = tx.clone();
            let policy = Arc::clone(&policy);
            scope.spawn(move || {
                let mut env = factory(w);
                let max_steps = env.spec().max_steps;
                let mut rng = StdRng::seed_from_u64(
                    config.seed ^ (w as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                );
                let mut noise = OuNoise::new(action_dim, ou);
                let mut actor = policy.read().expect("policy lock").clone();
                let mut scratch = ActorScratch::new(&actor);

                'collect: loop {
                    // Fresh snapshot per episode; staleness within one
                    // episode is acceptable.
                    actor.clone_from(&policy.read().expect("policy lock"));
                    let mut obs = env.reset(&mut rng);
                    noise.reset();
                    let mut ret = 0.0;
                    let mut steps = 0usize;

                    for _ in 0..max_steps {
                        let idx = claimed.fetch_add(1, Ordering::Relaxed);
                        if idx >= config.total_steps {
                            break 'collect;
                        }
                        let action: Vec<f64> = if idx < config.warmup_steps {
                            (0..action_dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
                        } else {
                            let mut a = actor.forward(&obs, &mut scratch).to_vec();
                            for (ai, &ni) in a.iter_mut().zip(noise.sample(&mut rng)) {
                                *ai = (*ai + ni).clamp(-1.0, 1.0);
                            }
                            a
                        };

                        let step = env.step(&action, &mut rng);
                        let done = step.done;
                        ret += step.reward;
                        steps += 1;
                        let sent = tx.send(Msg::Step(Transition {
                            obs,
                            action,
                            reward: step.reward,
                            next_obs: step.obs.clone(),
                            done,
                        }));
                        if sent.is_err() {
                            break 'collect;
                        }
                        obs = step.obs;
                        if done {
                            break;
                        }
                    }

                    if steps > 0 {
                        let _ = tx.send(Msg::Episode(WorkerEpisode {
                            worker: w,
                            ret,
                            steps,
                        }));
                    }
                }
            });
        }
        drop(tx);

        // Learner loop on the calling thread.
        while let Ok(msg) = rx.recv() {
            match msg {
                Msg::Step(t) => {
                    replay.push(t);
                    transitions += 1;
                    if transitions >= config.warmup_steps && replay.len() >= batch_size {
                        for _ in 0..config.updates_per_transition {
                            agent.train_step(&replay, &mut learner_rng);
                            updates += 1;
                            if updates.is_multiple_of(config.publish_every) {
                                policy
                                    .write()
                                    .expect("policy lock")
                                    .clone_from(agent.actor());
                            }
                        }
                    }
                }
                Msg::Episode(e) => episodes.push(e),
            }
        }
    });

    // Final publication so callers observing the snapshot see the end state.
    policy
        .write()
        .expect("policy lock")
        .clone_from(agent.actor());

    Ok(ParallelReport {
        episodes,
        transitions,
        updates,
    })
}
