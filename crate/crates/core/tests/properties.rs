//! Randomized property checks for the crate's core invariants.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use mvrl::fusion::{attention_entropy, AttentionPool, PoolGrads, PoolScratch};
use mvrl::nn::{Activation, Linear, Mlp, MlpScratch};
use mvrl::obs::Obs;
use mvrl::replay::{ReplayBuffer, Transition};
use mvrl::reward::potential_shaping;

fn features_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
    // 1..=5 views of a fixed small dimension, values well inside f64 range.
    (1usize..=5).prop_flat_map(|k| {
        proptest::collection::vec(proptest::collection::vec(-10.0..10.0f64, 4), k..=k)
    })
}

fn mask_strategy(k: usize) -> impl Strategy<Value = Vec<bool>> {
    proptest::collection::vec(any::<bool>(), k..=k)
        .prop_filter("at least one active view", |m| m.iter().any(|&b| b))
}

proptest! {
    /// Attention weights are always a probability simplex over active views.
    #[test]
    fn attention_weights_are_a_simplex(
        features in features_strategy(),
        seed in 0u64..1_000,
    ) {
        let k = features.len();
        let mut rng = StdRng::seed_from_u64(seed);
        let pool = AttentionPool::new(4, 6, &mut rng);
        let mut scratch = PoolScratch::new(&pool, k);

        pool.forward(&features, None, &mut scratch);
        let w = scratch.weights();
        prop_assert!(w.iter().all(|&x| (0.0..=1.0).contains(&x)));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    /// Masked views get exactly zero weight; the rest still sum to one.
    #[test]
    fn masking_excludes_views_exactly(
        (features, mask) in features_strategy()
            .prop_flat_map(|f| {
                let k = f.len();
                (Just(f), mask_strategy(k))
            }),
        seed in 0u64..1_000,
    ) {
        let k = features.len();
        let mut rng = StdRng::seed_from_u64(seed);
        let pool = AttentionPool::new(4, 6, &mut rng);
        let mut scratch = PoolScratch::new(&pool, k);

        pool.forward(&features, Some(&mask), &mut scratch);
        let w = scratch.weights();
        for (v, &m) in mask.iter().enumerate() {
            if !m {
                prop_assert_eq!(w[v], 0.0);
            }
        }
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    /// The fused vector lies in the convex hull of the active features,
    /// checked per coordinate.
    #[test]
    fn fused_output_stays_in_the_active_hull(
        (features, mask) in features_strategy()
            .prop_flat_map(|f| {
                let k = f.len();
                (Just(f), mask_strategy(k))
            }),
        seed in 0u64..1_000,
    ) {
        let k = features.len();
        let mut rng = StdRng::seed_from_u64(seed);
        let pool = AttentionPool::new(4, 6, &mut rng);
        let mut scratch = PoolScratch::new(&pool, k);

        pool.forward(&features, Some(&mask), &mut scratch);
        for d in 0..4 {
            let active = features
                .iter()
                .zip(&mask)
                .filter(|(_, &m)| m)
                .map(|(f, _)| f[d]);
            let lo = active.clone().fold(f64::INFINITY, f64::min);
            let hi = active.fold(f64::NEG_INFINITY, f64::max);
            let f = scratch.fused()[d];
            prop_assert!(f >= lo - 1e-9 && f <= hi + 1e-9, "dim {}: {} not in [{}, {}]", d, f, lo, hi);
        }
    }

    /// Attention entropy is bounded by `ln` of the active view count.
    #[test]
    fn entropy_is_bounded_by_ln_k(
        features in features_strategy(),
        seed in 0u64..1_000,
    ) {
        let k = features.len();
        let mut rng = StdRng::seed_from_u64(seed);
        let pool = AttentionPool::new(4, 6, &mut rng);
        let mut scratch = PoolScratch::new(&pool, k);

        pool.forward(&features, None, &mut scratch);
        let h = attention_entropy(scratch.weights());
        prop_assert!(h >= -1e-12);
        prop_assert!(h <= (k as f64).ln() + 1e-9);
    }

    /// Scoring-path gradients vanish when every view carries the same
    /// feature vector: the softmax sits at its stationary uniform point.
    #[test]
    fn identical_views_have_symmetric_gradients(
        feat in proptest::collection::vec(-5.0..5.0f64, 4),
        k in 2usize..=4,
        seed in 0u64..1_000,
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let pool = AttentionPool::new(4, 6, &mut rng);
        let features = vec![feat; k];
        let mut scratch = PoolScratch::new(&pool, k);
        let mut grads = PoolGrads::zeroed(&pool);
        let mut d_features = vec![vec![0.0; 4]; k];
        let d_fused = vec![1.0; 4];

        pool.forward(&features, None, &mut scratch);
        pool.backward(&features, None, &mut scratch, &d_fused, &mut grads, &mut d_features);

        // All views identical: every view must receive the same gradient.
        for v in 1..k {
            for (a, b) in d_features[v].iter().zip(&d_features[0]) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }

    /// `theta' <- tau * theta + (1 - tau) * theta'` holds elementwise.
    #[test]
    fn soft_update_is_exact_interpolation(
        tau in 0.0..=1.0f64,
        seed in 0u64..1_000,
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let src = Linear::new(3, 4, Activation::Tanh, mvrl::nn::Init::Xavier, &mut rng);
        let mut dst = Linear::new(3, 4, Activation::Tanh, mvrl::nn::Init::Xavier, &mut rng);
        let before: Vec<f64> = dst.weights().to_vec();

        dst.soft_update_from(&src, tau);
        for ((d, &s), &b) in dst.weights().iter().zip(src.weights()).zip(&before) {
            let expect = tau * s + (1.0 - tau) * b;
            prop_assert!((d - expect).abs() < 1e-15);
        }
    }

    /// Discounted potential-shaping terms telescope to
    /// `gamma^T * phi(s_T) - phi(s_0)` for any potential sequence.
    #[test]
    fn shaping_telescopes(
        phis in proptest::collection::vec(-100.0..100.0f64, 2..50),
        gamma in 0.0..=1.0f64,
    ) {
        let horizon = phis.len() - 1;
        let mut acc = 0.0;
        let mut disc = 1.0;
        for t in 0..horizon {
            acc += disc * potential_shaping(gamma, phis[t], phis[t + 1]);
            disc *= gamma;
        }
        let closed = disc * phis[horizon] - phis[0];
        // Scale tolerance to the magnitudes involved.
        let scale = phis.iter().fold(1.0f64, |a, &p| a.max(p.abs()));
        prop_assert!((acc - closed).abs() < 1e-9 * scale * horizon as f64);
    }

    /// A replay ring never exceeds capacity and keeps exactly the most
    /// recent `capacity` items.
    #[test]
    fn replay_keeps_the_newest_items(
        capacity in 1usize..20,
        pushes in 0usize..60,
    ) {
        let mut buf = ReplayBuffer::new(capacity);
        for i in 0..pushes {
            buf.push(Transition {
                obs: Obs::zeros(1, 1),
                action: vec![0.0],
                reward: i as f64,
                next_obs: Obs::zeros(1, 1),
                done: false,
            });
        }
        prop_assert_eq!(buf.len(), pushes.min(capacity));
        if !buf.is_empty() {
            let mut rng = StdRng::seed_from_u64(0);
            let oldest_kept = pushes.saturating_sub(capacity) as f64;
            for t in buf.sample(&mut rng, 100) {
                prop_assert!(t.reward >= oldest_kept);
                prop_assert!(t.reward < pushes as f64);
            }
        }
    }

    /// Activation derivatives match central differences everywhere sampled
    /// (away from the ReLU kink).
    #[test]
    fn activation_gradients_match_finite_differences(
        z in -5.0..5.0f64,
    ) {
        prop_assume!(z.abs() > 1e-3);
        for act in [
            Activation::Identity,
            Activation::Relu,
            Activation::Tanh,
            Activation::Sigmoid,
        ] {
            let eps = 1e-6;
            let numeric = (act.forward(z + eps) - act.forward(z - eps)) / (2.0 * eps);
            let analytic = act.grad_from_output(act.forward(z));
            prop_assert!(
                (numeric - analytic).abs() < 1e-6,
                "{:?} at {}: numeric {} analytic {}", act, z, numeric, analytic
            );
        }
    }

    /// Network forward passes are pure: same input, same output.
    #[test]
    fn mlp_forward_is_pure(
        input in proptest::collection::vec(-3.0..3.0f64, 3),
        seed in 0u64..1_000,
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mlp = Mlp::new(3, &[(5, Activation::Tanh), (2, Activation::Identity)], &mut rng);
        let mut scratch = MlpScratch::for_mlp(&mlp);
        let a = mlp.forward(&input, &mut scratch).to_vec();
        let b = mlp.forward(&input, &mut scratch).to_vec();
        prop_assert_eq!(a, b);
    }
}
