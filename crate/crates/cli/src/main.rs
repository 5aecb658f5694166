//! Command-line front end: train, evaluate, and sweep.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use mvrl::ddpg::{DdpgAgent, DdpgConfig};
use mvrl::env::{Environment, Nav, NavConfig, Pendulum, PendulumConfig};
use mvrl::metrics::CsvLogger;
use mvrl::train::{
    aggregate, sweep, train_parallel, write_sweep_csv, EvalReport, ParallelConfig, SweepConfig,
    TrainConfig, Trainer,
};

#[derive(Parser)]
#[command(name = "mvrl", version, about = "Multi-view actor-critic training")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train an agent and write checkpoint plus episode CSV.
    Train(TrainArgs),
    /// Evaluate a checkpoint with the deterministic policy.
    Eval(EvalArgs),
    /// Train across several seeds and summarize.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnvKind {
    /// Torque-limited pendulum swing-up, single view.
    Pendulum,
    /// Multi-view point navigation, three sensors of varying noise.
    Nav,
    /// Navigation with the noisiest sensor replaced by pure garbage.
    NavFaulty,
    /// Navigation with random per-step sensor dropout.
    NavDropout,
}

impl EnvKind {
    fn build(self) -> Box<dyn Environment> {
        match self {
            EnvKind::Pendulum => Box::new(Pendulum::new(PendulumConfig::default())),
            EnvKind::Nav => Box::new(Nav::new(NavConfig::default())),
            EnvKind::NavFaulty => Box::new(Nav::new(NavConfig {
                faulty_view: Some(2),
                ..NavConfig::default()
            })),
            EnvKind::NavDropout => Box::new(Nav::new(NavConfig {
                dropout_prob: 0.2,
                ..NavConfig::default()
            })),
        }
    }
}

#[derive(Parser, Debug)]
struct HyperArgs {
    /// Discount factor.
    #[arg(long)]
    gamma: Option<f64>,
    /// Target tracking rate.
    #[arg(long)]
    tau: Option<f64>,
    /// Actor learning rate.
    #[arg(long)]
    actor_lr: Option<f64>,
    /// Critic learning rate.
    #[arg(long)]
    critic_lr: Option<f64>,
    /// Batch size per update.
    #[arg(long)]
    batch_size: Option<usize>,
    /// Fused feature dimension.
    #[arg(long)]
    feature_dim: Option<usize>,
}

impl HyperArgs {
    fn apply(&self, config: &mut DdpgConfig) {
        if let Some(v) = self.gamma {
            config.gamma = v;
        }
        if let Some(v) = self.tau {
            config.tau = v;
        }
        if let Some(v) = self.actor_lr {
            config.actor_lr = v;
        }
        if let Some(v) = self.critic_lr {
            config.critic_lr = v;
        }
        if let Some(v) = self.batch_size {
            config.batch_size = v;
        }
        if let Some(v) = self.feature_dim {
            config.fusion.feature_dim = v;
        }
    }
}

#[derive(Parser, Debug)]
struct TrainArgs {
    #[arg(long, value_enum)]
    env: EnvKind,
    /// Environment-step budget.
    #[arg(long, default_value_t = 20_000)]
    steps: usize,
    /// Random-action steps before learning.
    #[arg(long, default_value_t = 1_000)]
    warmup: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Gradient updates per environment step.
    #[arg(long, default_value_t = 1)]
    updates_per_step: usize,
    /// Collector threads; 0 trains single-threaded and reproducibly.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Output directory for checkpoint and CSV.
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    /// Deterministic eval episodes after training.
    #[arg(long, default_value_t = 10)]
    eval_episodes: usize,
    #[command(flatten)]
    hypers: HyperArgs,
}

#[derive(Parser, Debug)]
struct EvalArgs {
    /// Checkpoint written by `train`.
    #[arg(long)]
    checkpoint: PathBuf,
    #[arg(long, value_enum)]
    env: EnvKind,
    #[arg(long, default_value_t = 10)]
    episodes: usize,
    #[arg(long, default_value_t = 9_999)]
    seed: u64,
    /// Also run a uniform-random baseline under the same protocol.
    #[arg(long)]
    baseline: bool,
}

#[derive(Parser, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    env: EnvKind,
    /// Comma-separated seed list.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 20_000)]
    steps: usize,
    #[arg(long, default_value_t = 1_000)]
    warmup: usize,
    #[arg(long, default_value_t = 10)]
    eval_episodes: usize,
    /// Sweep threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Output CSV path.
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
    #[command(flatten)]
    hypers: HyperArgs,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Train(args) => train(args),
        Command::Eval(args) => eval(args),
        Command::Sweep(args) => run_sweep(args),
    }
}

fn agent_config_for(env: &dyn Environment, hypers: &HyperArgs) -> DdpgConfig {
    let spec = env.spec();
    let mut config = DdpgConfig::for_shape(spec.num_views, spec.view_dim, spec.action_dim);
    hypers.apply(&mut config);
    config
}

fn print_report(label: &str, report: &EvalReport) {
    println!(
        "{label}: mean return {:.2} +/- {:.2} over {} episodes ({:.1} steps/episode)",
        report.mean_return, report.std_return, report.episodes, report.mean_steps
    );
    if !report.mean_attention.is_empty() {
        let weights: Vec<String> = report
            .mean_attention
            .iter()
            .map(|w| format!("{w:.3}"))
            .collect();
        println!("{label}: mean attention per view [{}]", weights.join(", "));
    }
}

fn train(args: TrainArgs) -> Result<()> {
    let env = args.env.build();
    let agent_config = agent_config_for(env.as_ref(), &args.hypers);
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output dir {}", args.out.display()))?;
    let checkpoint_path = args.out.join("agent.json");
    let csv_path = args.out.join("episodes.csv");

    if args.workers == 0 {
        let train_config = TrainConfig {
            total_steps: args.steps,
            warmup_steps: args.warmup,
            updates_per_step: args.updates_per_step,
            replay_capacity: 100_000,
            seed: args.seed,
        };
        let mut trainer = Trainer::new(env, agent_config, train_config)?;
        trainer.run();
        trainer.write_csv(&csv_path)?;

        let episodes = trainer.records().len();
        let last = trainer.records().last().expect("at least one episode");
        println!(
            "trained {} episodes / {} env steps (final return {:.2})",
            episodes,
            trainer.total_env_steps(),
            last.ret
        );
        let report = trainer.evaluate(args.eval_episodes);
        print_report("eval", &report);
        trainer.agent().save(&checkpoint_path)?;
    } else {
        let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(args.seed);
        let mut agent = DdpgAgent::new(agent_config, &mut rng)?;
        let parallel_config = ParallelConfig {
            workers: args.workers,
            total_steps: args.steps,
            warmup_steps: args.warmup,
            updates_per_transition: args.updates_per_step,
            replay_capacity: 100_000,
            publish_every: 10,
            seed: args.seed,
        };
        let kind = args.env;
        let report = train_parallel(&mut agent, |_| kind.build(), &parallel_config)?;
        println!(
            "trained {} episodes / {} transitions / {} updates across {} workers",
            report.episodes.len(),
            report.transitions,
            report.updates,
            args.workers
        );

        let mut logger = CsvLogger::create(&csv_path)?;
        for e in &report.episodes {
            logger.log(e)?;
        }
        logger.flush()?;

        // Evaluation reuses the single-thread loop with a fresh env.
        let train_config = TrainConfig {
            total_steps: 0,
            seed: args.seed,
            ..TrainConfig::default()
        };
        let mut trainer = Trainer::with_agent(args.env.build(), agent, train_config);
        let report = trainer.evaluate(args.eval_episodes);
        print_report("eval", &report);
        trainer.agent().save(&checkpoint_path)?;
    }

    println!("checkpoint: {}", checkpoint_path.display());
    println!("episodes csv: {}", csv_path.display());
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let env = args.env.build();
    let agent = DdpgAgent::load(&args.checkpoint)
        .with_context(|| format!("loading checkpoint {}", args.checkpoint.display()))?;

    let spec = env.spec();
    let fusion = &agent.config().fusion;
    if fusion.num_views != spec.num_views
        || fusion.view_dim != spec.view_dim
        || agent.config().action_dim != spec.action_dim
    {
        bail!(
            "checkpoint shape ({} views x {}, {} actions) does not match env ({} views x {}, {} actions)",
            fusion.num_views,
            fusion.view_dim,
            agent.config().action_dim,
            spec.num_views,
            spec.view_dim,
            spec.action_dim
        );
    }

    let train_config = TrainConfig {
        total_steps: 0,
        seed: args.seed,
        ..TrainConfig::default()
    };
    let mut trainer = Trainer::with_agent(env, agent, train_config);
    let report = trainer.evaluate(args.episodes);
    print_report("policy", &report);

    if args.baseline {
        let baseline = trainer.evaluate_random(args.episodes);
        print_report("random", &baseline);
        println!(
            "improvement: {:.2}",
            report.mean_return - baseline.mean_return
        );
    }
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let probe_env = args.env.build();
    let agent_config = agent_config_for(probe_env.as_ref(), &args.hypers);
    drop(probe_env);

    let train_config = TrainConfig {
        total_steps: args.steps,
        warmup_steps: args.warmup,
        updates_per_step: 1,
        replay_capacity: 100_000,
        seed: 0,
    };
    let sweep_config = SweepConfig {
        seeds: args.seeds.clone(),
        eval_episodes: args.eval_episodes,
        threads: args.threads,
    };
    let kind = args.env;
    let summaries = sweep(
        |_| kind.build(),
        &agent_config,
        &train_config,
        &sweep_config,
    )?;

    for s in &summaries {
        println!(
            "seed {:>3}: eval {:.2} +/- {:.2} ({} episodes trained)",
            s.seed, s.eval.mean_return, s.eval.std_return, s.episodes
        );
    }
    let agg = aggregate(&summaries);
    println!(
        "across {} seeds: mean {:.2} +/- {:.2}, range [{:.2}, {:.2}]",
        summaries.len(),
        agg.mean_return,
        agg.std_return,
        agg.min_return,
        agg.max_return
    );
    write_sweep_csv(&args.out, &summaries)?;
    println!("sweep csv: {}", args.out.display());
    Ok(())
}
