//! Multi-seed training sweeps.
//!
//! RL results vary heavily with the seed, so any claim needs several
//! independent runs. A sweep trains one agent per seed, seeds running in
//! parallel while each run stays single-threaded and therefore exactly
//! reproducible on its own.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::ddpg::DdpgConfig;
use crate::env::Environment;
use crate::fusion::attention_entropy;
use crate::metrics::{mean, std_dev, CsvLogger};
use crate::train::{EvalReport, TrainConfig, Trainer};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub seeds: Vec<u64>,
    /// Deterministic eval episodes after each run. Default `10`.
    pub eval_episodes: usize,
    /// Worker threads; `0` means one per available core. Default `0`.
    pub threads: usize,
}

/// Outcome of one seed's run.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSummary {
    pub seed: u64,
    pub episodes: usize,
    /// Mean training return over the final ten episodes.
    pub train_return_final: f64,
    pub eval: EvalReport,
}

/// Flat CSV row for a [`SeedSummary`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub seed: u64,
    pub episodes: usize,
    pub train_return_final: f64,
    pub eval_mean_return: f64,
    pub eval_std_return: f64,
    pub eval_mean_steps: f64,
    /// Entropy of the mean attention distribution, in nats.
    pub eval_attn_entropy: f64,
}

impl From<&SeedSummary> for SweepRecord {
    fn from(s: &SeedSummary) -> Self {
        Self {
            seed: s.seed,
            episodes: s.episodes,
            train_return_final: s.train_return_final,
            eval_mean_return: s.eval.mean_return,
            eval_std_return: s.eval.std_return,
            eval_mean_steps: s.eval.mean_steps,
            eval_attn_entropy: attention_entropy(&s.eval.mean_attention),
        }
    }
}

/// Across-seed aggregate of evaluation returns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAggregate {
    pub mean_return: f64,
    pub std_return: f64,
    pub min_return: f64,
    pub max_return: f64,
}

pub fn aggregate(summaries: &[SeedSummary]) -> SweepAggregate {
    let returns: Vec<f64> = summaries.iter().map(|s| s.eval.mean_return).collect();
    SweepAggregate {
        mean_return: mean(&returns),
        std_return: std_dev(&returns),
        min_return: returns.iter().copied().fold(f64::INFINITY, f64::min),
        max_return: returns.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Run one full training per seed; `train.seed` is overridden per run.
///
/// The factory receives the seed, so environments can vary with it or stay
/// identical across runs. Results come back in the order of
/// `config.seeds` regardless of scheduling.
pub fn sweep<E, F>(
    env_factory: F,
    agent_config: &DdpgConfig,
    train: &TrainConfig,
    config: &SweepConfig,
) -> Result<Vec<SeedSummary>>
where
    E: Environment,
    F: Fn(u64) -> E + Sync,
{
    agent_config.validate()?;
    let threads = if config.threads == 0 {
        thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        config.threads
    }
    .min(config.seeds.len().max(1));

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, SeedSummary)>> = Mutex::new(Vec::new());
    let factory = &env_factory;

    thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&seed) = config.seeds.get(i) else {
                    break;
                };
                let mut train_config = train.clone();
                train_config.seed = seed;
                let mut trainer = Trainer::new(factory(seed), agent_config.clone(), train_config)
                    .expect("config validated before spawning");
                trainer.run();

                let returns: Vec<f64> = trainer.records().iter().map(|r| r.ret).collect();
                let tail = &returns[returns.len().saturating_sub(10)..];
                let summary = SeedSummary {
                    seed,
                    episodes: trainer.records().len(),
                    train_return_final: mean(tail),
                    eval: trainer.evaluate(config.eval_episodes),
                };
                results.lock().expect("results lock").push((i, summary));
            });
        }
    });

    let mut collected = results.into_inner().expect("results lock");
    collected.sort_by_key(|(i, _)| *i);
    Ok(collected.into_iter().map(|(_, s)| s).collect())
}

/// Write one CSV row per seed.
pub fn write_sweep_csv<P: AsRef<Path>>(path: P, summaries: &[SeedSummary]) -> Result<()> {
    let mut logger = CsvLogger::create(path)?;
    for s in summaries {
        logger.log(&SweepRecord::from(s))?;
    }
    logger.flush()
}
