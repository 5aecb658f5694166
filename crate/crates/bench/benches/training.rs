//! End-to-end benchmarks: environment stepping, policy inference, and the
//! full gradient update. `train_step_batch64` is the number that bounds
//! wall-clock training throughput.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::Rng;

use mvrl::env::{Environment, Nav, NavConfig, Pendulum, PendulumConfig};

use mvrl_bench::{bench_agent, bench_rng, filled_replay, random_obs};

fn env_steps(c: &mut Criterion) {
    let mut rng = bench_rng();

    let mut pendulum = Pendulum::new(PendulumConfig::default());
    pendulum.reset(&mut rng);
    c.bench_function("pendulum_step", |b| {
        b.iter(|| {
            let step = pendulum.step(black_box(&[0.3]), &mut rng);
            if step.done {
                pendulum.reset(&mut rng);
            }
            black_box(step.reward)
        })
    });

    let mut nav = Nav::new(NavConfig::default());
    nav.reset(&mut rng);
    c.bench_function("nav_step", |b| {
        b.iter(|| {
            let step = nav.step(black_box(&[0.3, -0.2]), &mut rng);
            if step.done {
                nav.reset(&mut rng);
            }
            black_box(step.reward)
        })
    });
}

fn policy_inference(c: &mut Criterion) {
    let mut agent = bench_agent();
    let mut rng = bench_rng();
    let obs = random_obs(&mut rng);

    c.bench_function("actor_act", |b| {
        b.iter(|| black_box(agent.act(black_box(&obs))[0]))
    });

    let action: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
    c.bench_function("critic_q_value", |b| {
        b.iter(|| black_box(agent.q_value(black_box(&obs), &action)))
    });
}

fn gradient_update(c: &mut Criterion) {
    let mut agent = bench_agent();
    let replay = filled_replay(10_000);
    let mut rng = bench_rng();

    c.bench_function("train_step_batch64", |b| {
        b.iter(|| black_box(agent.train_step(&replay, &mut rng).critic_loss))
    });
}

criterion_group!(benches, env_steps, policy_inference, gradient_update);
criterion_main!(benches);
