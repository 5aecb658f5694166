//! Shared fixtures for the criterion benches.
//!
//! Everything is seeded so successive `cargo bench` runs measure the same
//! weights and the same data, not run-to-run initialization noise.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mvrl::ddpg::{DdpgAgent, DdpgConfig};
use mvrl::fusion::FusionSpec;
use mvrl::obs::Obs;
use mvrl::replay::{ReplayBuffer, Transition};

/// Observation shape used across the benches: matches the navigation task.
pub const NUM_VIEWS: usize = 3;
pub const VIEW_DIM: usize = 4;
pub const ACTION_DIM: usize = 2;

pub fn bench_rng() -> StdRng {
    StdRng::seed_from_u64(0xBE7C)
}

pub fn bench_spec() -> FusionSpec {
    DdpgConfig::for_shape(NUM_VIEWS, VIEW_DIM, ACTION_DIM).fusion
}

pub fn bench_agent() -> DdpgAgent {
    let mut rng = bench_rng();
    DdpgAgent::new(
        DdpgConfig::for_shape(NUM_VIEWS, VIEW_DIM, ACTION_DIM),
        &mut rng,
    )
    .expect("valid bench config")
}

pub fn random_obs(rng: &mut StdRng) -> Obs {
    Obs {
        views: (0..NUM_VIEWS)
            .map(|_| (0..VIEW_DIM).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect(),
        mask: vec![true; NUM_VIEWS],
    }
}

pub fn random_transition(rng: &mut StdRng) -> Transition {
    Transition {
        obs: random_obs(rng),
        action: (0..ACTION_DIM).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        reward: rng.gen_range(-1.0..1.0),
        next_obs: random_obs(rng),
        done: rng.gen_bool(0.05),
    }
}

/// A replay buffer pre-filled past any batch size the benches use.
pub fn filled_replay(len: usize) -> ReplayBuffer {
    let mut rng = bench_rng();
    let mut buf = ReplayBuffer::new(len);
    for _ in 0..len {
        buf.push(random_transition(&mut rng));
    }
    buf
}
