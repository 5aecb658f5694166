//! Multi-view fusion: per-view encoders followed by attention pooling.
//!
//! Each sensor view is embedded by its own encoder network, then the
//! per-view features are combined by an [`AttentionPool`] into a single
//! fused representation. Policy and value heads consume the fused vector.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{AttentionPool, PoolGrads, PoolScratch};
use crate::nn::{Activation, Mlp, MlpGrads, MlpScratch};

/// Shape of a fusion encoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionSpec {
    /// Number of sensor views.
    pub num_views: usize,
    /// Dimension of each raw view.
    pub view_dim: usize,
    /// Dimension of the per-view (and fused) feature vector.
    pub feature_dim: usize,
    /// Hidden widths of each per-view encoder.
    pub encoder_hidden: Vec<usize>,
    /// Hidden width of the attention scoring network.
    pub score_hidden: usize,
}

impl FusionSpec {
    pub fn validate(&self) -> crate::Result<()> {
        if self.num_views == 0 || self.view_dim == 0 || self.feature_dim == 0 {
            return Err(crate::Error::InvalidConfig(
                "fusion dims must be > 0".to_owned(),
            ));
        }
        if self.score_hidden == 0 {
            return Err(crate::Error::InvalidConfig(
                "score_hidden must be > 0".to_owned(),
            ));
        }
        Ok(())
    }
}

/// Per-view encoders plus attention pooling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FusionEncoder {
    spec: FusionSpec,
    encoders: Vec<Mlp>,
    pool: AttentionPool,
}

/// Reusable forward/backward workspace for a [`FusionEncoder`].
#[derive(Debug, Clone)]
pub struct FusionScratch {
    enc: Vec<MlpScratch>,
    features: Vec<Vec<f64>>,
    pool: PoolScratch,
    d_features: Vec<Vec<f64>>,
}

/// Gradient accumulators for a [`FusionEncoder`].
#[derive(Debug, Clone)]
pub struct FusionGrads {
    enc: Vec<MlpGrads>,
    pool: PoolGrads,
}

impl FusionEncoder {
    /// Encoders are tanh-headed so per-view features live in `[-1, 1]`.
    pub fn new<R: Rng + ?Sized>(spec: FusionSpec, rng: &mut R) -> Self {
        let mut layers: Vec<(usize, Activation)> = spec
            .encoder_hidden
            .iter()
            .map(|&w| (w, Activation::Relu))
            .collect();
        layers.push((spec.feature_dim, Activation::Tanh));

        let encoders = (0..spec.num_views)
            .map(|_| Mlp::new(spec.view_dim, &layers, rng))
            .collect();
        let pool = AttentionPool::new(spec.feature_dim, spec.score_hidden, rng);
        Self {
            spec,
            encoders,
            pool,
        }
    }

    #[inline]
    pub fn spec(&self) -> &FusionSpec {
        &self.spec
    }

    #[inline]
    pub fn feature_dim(&self) -> usize {
        self.spec.feature_dim
    }

    pub fn num_params(&self) -> usize {
        self.encoders.iter().map(Mlp::num_params).sum::<usize>() + self.pool.num_params()
    }

    /// Encode and pool `views`; the fused vector is `scratch.fused()` and
    /// the attention weights are `scratch.attention_weights()`.
    pub fn forward(&self, views: &[Vec<f64>], mask: Option<&[bool]>, scratch: &mut FusionScratch) {
        assert_eq!(views.len(), self.spec.num_views, "view count");

        for v in 0..views.len() {
            // Masked views are skipped; the pool ignores their features.
            if mask.is_none_or(|m| m[v]) {
                self.encoders[v].forward(&views[v], &mut scratch.enc[v]);
                scratch.features[v].copy_from_slice(scratch.enc[v].output());
            }
        }
        self.pool
            .forward(&scratch.features, mask, &mut scratch.pool);
    }

    /// Backward pass for the most recent `forward` with this `scratch`.
    ///
    /// Gradients are accumulated into `grads`; `d_views`, when present, is
    /// overwritten with `dL/d(view_v)`.
    pub fn backward(
        &self,
        views: &[Vec<f64>],
        mask: Option<&[bool]>,
        scratch: &mut FusionScratch,
        d_fused: &[f64],
        grads: &mut FusionGrads,
        mut d_views: Option<&mut [Vec<f64>]>,
    ) {
        self.pool.backward(
            &scratch.features,
            mask,
            &mut scratch.pool,
            d_fused,
            &mut grads.pool,
            &mut scratch.d_features,
        );

        for v in 0..views.len() {
            let d_view = d_views.as_deref_mut().map(|d| &mut d[v][..]);
            if mask.is_none_or(|m| m[v]) {
                self.encoders[v].backward(
                    &views[v],
                    &mut scratch.enc[v],
                    &scratch.d_features[v],
                    d_view,
                    &mut grads.enc[v],
                );
            } else if let Some(d) = d_view {
                d.fill(0.0);
            }
        }
    }

    pub fn soft_update_from(&mut self, src: &Self, tau: f64) {
        assert_eq!(self.spec, src.spec);
        for (dst, s) in self.encoders.iter_mut().zip(&src.encoders) {
            dst.soft_update_from(s, tau);
        }
        self.pool.soft_update_from(&src.pool, tau);
    }

    pub fn param_grad_pairs<'a>(
        &'a mut self,
        grads: &'a FusionGrads,
    ) -> Vec<(&'a mut [f64], &'a [f64])> {
        let mut pairs = Vec::new();
        for (enc, g) in self.encoders.iter_mut().zip(&grads.enc) {
            pairs.extend(enc.param_grad_pairs(g));
        }
        pairs.extend(self.pool.param_grad_pairs(&grads.pool));
        pairs
    }
}

impl FusionScratch {
    pub fn new(encoder: &FusionEncoder) -> Self {
        let spec = &encoder.spec;
        Self {
            enc: encoder.encoders.iter().map(MlpScratch::for_mlp).collect(),
            features: vec![vec![0.0; spec.feature_dim]; spec.num_views],
            pool: PoolScratch::new(&encoder.pool, spec.num_views),
            d_features: vec![vec![0.0; spec.feature_dim]; spec.num_views],
        }
    }

    /// Fused feature vector from the latest `forward`.
    #[inline]
    pub fn fused(&self) -> &[f64] {
        self.pool.fused()
    }

    /// Attention weights from the latest `forward`.
    #[inline]
    pub fn attention_weights(&self) -> &[f64] {
        self.pool.weights()
    }
}

impl FusionGrads {
    pub fn zeroed(encoder: &FusionEncoder) -> Self {
        Self {
            enc: encoder.encoders.iter().map(MlpGrads::zeroed).collect(),
            pool: PoolGrads::zeroed(&encoder.pool),
        }
    }

    pub fn zero(&mut self) {
        for g in &mut self.enc {
            g.zero();
        }
        self.pool.zero();
    }

    pub fn norm_sq(&self) -> f64 {
        self.enc.iter().map(MlpGrads::norm_sq).sum::<f64>() + self.pool.norm_sq()
    }

    pub fn scale(&mut self, factor: f64) {
        for g in &mut self.enc {
            g.scale(factor);
        }
        self.pool.scale(factor);
    }
}
