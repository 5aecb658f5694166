//! End-to-end learning checks on the probe environments.
//!
//! Each probe isolates one failure mode, so these tests bisect training
//! defects: a value-probe failure means the critic regression is broken, an
//! action-probe failure points at the actor update, and an obs-probe
//! failure means observations are not reaching the value estimate.

use mvrl::ddpg::DdpgConfig;
use mvrl::env::{ActionProbe, ObsProbe, ValueProbe};
use mvrl::obs::Obs;
use mvrl::train::{TrainConfig, Trainer};

fn probe_agent_config() -> DdpgConfig {
    let mut config = DdpgConfig::for_shape(2, 1, 1);
    config.batch_size = 32;
    // Probes are trivial fits; faster steps than the conservative defaults
    // keep the tests quick.
    config.critic_lr = 1e-2;
    config.actor_lr = 1e-3;
    config.tau = 0.01;
    config
}

fn train_config(total_steps: usize, seed: u64) -> TrainConfig {
    TrainConfig {
        total_steps,
        warmup_steps: 100,
        updates_per_step: 1,
        replay_capacity: 10_000,
        seed,
    }
}

#[test]
fn value_probe_critic_learns_the_constant() {
    let mut trainer = Trainer::new(
        ValueProbe::new(),
        probe_agent_config(),
        train_config(1_500, 0),
    )
    .unwrap();
    trainer.run();

    // Optimal Q is exactly 1 regardless of action.
    let obs = Obs::zeros(2, 1);
    for action in [-0.8, 0.0, 0.8] {
        let q = trainer.agent_mut().q_value(&obs, &[action]);
        assert!(
            (q - 1.0).abs() < 0.15,
            "Q(s, {action}) = {q}, want within 0.15 of 1.0"
        );
    }
}

#[test]
fn action_probe_actor_finds_the_reward_peak() {
    let mut trainer = Trainer::new(
        ActionProbe::new(),
        probe_agent_config(),
        train_config(3_000, 1),
    )
    .unwrap();
    trainer.run();

    let obs = Obs::zeros(2, 1);
    let action = trainer.agent_mut().act(&obs);
    assert!(
        (action[0] - 0.5).abs() < 0.15,
        "policy action {} should approach the probe target 0.5",
        action[0]
    );

    // The learned return should approach the maximum of 1.0.
    let report = trainer.evaluate(20);
    assert!(
        report.mean_return > 0.9,
        "eval return {} should be near 1.0",
        report.mean_return
    );
}

#[test]
fn obs_probe_critic_reads_its_inputs() {
    let mut trainer = Trainer::new(
        ObsProbe::new(),
        probe_agent_config(),
        train_config(2_000, 2),
    )
    .unwrap();
    trainer.run();

    let plus = Obs {
        views: vec![vec![1.0]; 2],
        mask: vec![true; 2],
    };
    let minus = Obs {
        views: vec![vec![-1.0]; 2],
        mask: vec![true; 2],
    };
    let q_plus = trainer.agent_mut().q_value(&plus, &[0.0]);
    let q_minus = trainer.agent_mut().q_value(&minus, &[0.0]);
    assert!(
        q_plus - q_minus > 1.0,
        "critic must separate the observed values: Q(+1)={q_plus} Q(-1)={q_minus}"
    );
    assert!((q_plus - 1.0).abs() < 0.3, "Q(+1)={q_plus}, want near 1");
    assert!((q_minus + 1.0).abs() < 0.3, "Q(-1)={q_minus}, want near -1");
}
