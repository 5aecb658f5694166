//! Softmax attention pooling over per-view feature vectors.
//!
//! Each view's feature vector is scored by a small shared network, scores
//! are passed through a softmax, and the pooled output is the
//! attention-weighted sum of the features:
//!
//! - `e_v = score(z_v)`
//! - `alpha = softmax(e)` (masked views excluded)
//! - `fused = sum_v alpha_v * z_v`
//!
//! The backward pass propagates through both the pooling path and the
//! scoring path, using the softmax Jacobian identity
//! `dL/de = alpha ⊙ (dL/dalpha - sum_u alpha_u dL/dalpha_u)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::nn::{Activation, Mlp, MlpGrads, MlpScratch};

/// Attention pool with a shared scoring network `feature_dim -> hidden -> 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttentionPool {
    feature_dim: usize,
    score: Mlp,
}

/// Reusable forward/backward workspace for an [`AttentionPool`].
#[derive(Debug, Clone)]
pub struct PoolScratch {
    score_scratches: Vec<MlpScratch>,
    scores: Vec<f64>,
    weights: Vec<f64>,
    fused: Vec<f64>,
    d_alpha: Vec<f64>,
    d_score: Vec<f64>,
    d_feature_tmp: Vec<f64>,
}

/// Gradient accumulator for the scoring network.
#[derive(Debug, Clone)]
pub struct PoolGrads {
    pub score: MlpGrads,
}

impl AttentionPool {
    pub fn new<R: Rng + ?Sized>(feature_dim: usize, score_hidden: usize, rng: &mut R) -> Self {
        let score = Mlp::new(
            feature_dim,
            &[(score_hidden, Activation::Tanh), (1, Activation::Identity)],
            rng,
        );
        Self { feature_dim, score }
    }

    #[inline]
    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn num_params(&self) -> usize {
        self.score.num_params()
    }

    /// Pool `features` into `scratch.fused()`.
    ///
    /// `mask[v] == false` excludes view `v` from the softmax entirely; its
    /// weight is exactly zero. At least one view must remain active.
    pub fn forward(&self, features: &[Vec<f64>], mask: Option<&[bool]>, scratch: &mut PoolScratch) {
        let k = features.len();
        assert_eq!(scratch.score_scratches.len(), k, "pool scratch view count");
        if let Some(m) = mask {
            assert_eq!(m.len(), k, "mask length");
            assert!(m.iter().any(|&a| a), "at least one view must be active");
        }

        for v in 0..k {
            assert_eq!(features[v].len(), self.feature_dim, "feature dim");
            if active(mask, v) {
                self.score
                    .forward(&features[v], &mut scratch.score_scratches[v]);
                scratch.scores[v] = scratch.score_scratches[v].output()[0];
            } else {
                scratch.scores[v] = f64::NEG_INFINITY;
            }
        }

        // Max-shifted softmax over active views.
        let max = scratch
            .scores
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for v in 0..k {
            let w = if active(mask, v) {
                (scratch.scores[v] - max).exp()
            } else {
                0.0
            };
            scratch.weights[v] = w;
            sum += w;
        }
        for w in &mut scratch.weights {
            *w /= sum;
        }

        scratch.fused.fill(0.0);
        for v in 0..k {
            let alpha = scratch.weights[v];
            if alpha == 0.0 {
                continue;
            }
            for (f, &z) in scratch.fused.iter_mut().zip(&features[v]) {
                *f += alpha * z;
            }
        }
    }

    /// Backward pass for the most recent `forward` with this `scratch`.
    ///
    /// Scoring-network gradients are accumulated into `grads`; `d_features`
    /// is overwritten with `dL/d(z_v)` per view (zero for masked views).
    pub fn backward(
        &self,
        features: &[Vec<f64>],
        mask: Option<&[bool]>,
        scratch: &mut PoolScratch,
        d_fused: &[f64],
        grads: &mut PoolGrads,
        d_features: &mut [Vec<f64>],
    ) {
        let k = features.len();
        assert_eq!(d_fused.len(), self.feature_dim, "d_fused dim");
        assert_eq!(d_features.len(), k, "d_features view count");

        // dL/dalpha_v = <z_v, d_fused>
        for v in 0..k {
            scratch.d_alpha[v] = if active(mask, v) {
                features[v].iter().zip(d_fused).map(|(&z, &d)| z * d).sum()
            } else {
                0.0
            };
        }

        // Softmax Jacobian: dL/de = alpha ⊙ (dL/dalpha - <alpha, dL/dalpha>)
        let dot: f64 = scratch
            .weights
            .iter()
            .zip(&scratch.d_alpha)
            .map(|(&a, &d)| a * d)
            .sum();
        for v in 0..k {
            scratch.d_score[v] = scratch.weights[v] * (scratch.d_alpha[v] - dot);
        }

        for v in 0..k {
            let d_feat = &mut d_features[v];
            assert_eq!(d_feat.len(), self.feature_dim, "d_features dim");
            if !active(mask, v) {
                d_feat.fill(0.0);
                continue;
            }

            // Pooling path: alpha_v * d_fused.
            let alpha = scratch.weights[v];
            for (d, &g) in d_feat.iter_mut().zip(d_fused) {
                *d = alpha * g;
            }

            // Scoring path: d_e_v through the shared scoring network.
            self.score.backward(
                &features[v],
                &mut scratch.score_scratches[v],
                &[scratch.d_score[v]],
                Some(&mut scratch.d_feature_tmp),
                &mut grads.score,
            );
            for (d, &g) in d_feat.iter_mut().zip(&scratch.d_feature_tmp) {
                *d += g;
            }
        }
    }

    pub fn soft_update_from(&mut self, src: &Self, tau: f64) {
        self.score.soft_update_from(&src.score, tau);
    }

    pub fn param_grad_pairs<'a>(
        &'a mut self,
        grads: &'a PoolGrads,
    ) -> Vec<(&'a mut [f64], &'a [f64])> {
        self.score.param_grad_pairs(&grads.score)
    }
}

#[inline]
fn active(mask: Option<&[bool]>, v: usize) -> bool {
    mask.is_none_or(|m| m[v])
}

impl PoolScratch {
    pub fn new(pool: &AttentionPool, num_views: usize) -> Self {
        Self {
            score_scratches: (0..num_views)
                .map(|_| MlpScratch::for_mlp(&pool.score))
                .collect(),
            scores: vec![0.0; num_views],
            weights: vec![0.0; num_views],
            fused: vec![0.0; pool.feature_dim],
            d_alpha: vec![0.0; num_views],
            d_score: vec![0.0; num_views],
            d_feature_tmp: vec![0.0; pool.feature_dim],
        }
    }

    /// Attention weights from the latest `forward` (a probability simplex).
    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Pooled feature vector from the latest `forward`.
    #[inline]
    pub fn fused(&self) -> &[f64] {
        &self.fused
    }
}

impl PoolGrads {
    pub fn zeroed(pool: &AttentionPool) -> Self {
        Self {
            score: MlpGrads::zeroed(&pool.score),
        }
    }

    pub fn zero(&mut self) {
        self.score.zero();
    }

    pub fn norm_sq(&self) -> f64 {
        self.score.norm_sq()
    }

    pub fn scale(&mut self, factor: f64) {
        self.score.scale(factor);
    }
}

/// Shannon entropy of an attention weight vector, in nats.
///
/// Zero for a one-hot distribution, `ln(k)` for uniform over `k` views.
pub fn attention_entropy(weights: &[f64]) -> f64 {
    weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| -w * w.ln())
        .sum()
}
