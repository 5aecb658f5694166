//! Deterministic policy network.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fusion::{FusionEncoder, FusionGrads, FusionScratch, FusionSpec};
use crate::nn::{Activation, Init, Mlp, MlpGrads, MlpScratch};
use crate::obs::Obs;

/// Policy `mu(obs) -> action` in `[-1, 1]^action_dim`: fusion front end,
/// then a tanh-headed MLP.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Actor {
    fusion: FusionEncoder,
    head: Mlp,
}

#[derive(Debug, Clone)]
pub struct ActorScratch {
    fusion: FusionScratch,
    head: MlpScratch,
    d_fused: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ActorGrads {
    fusion: FusionGrads,
    head: MlpGrads,
}

impl Actor {
    pub fn new<R: Rng + ?Sized>(
        fusion_spec: FusionSpec,
        hidden: &[usize],
        action_dim: usize,
        rng: &mut R,
    ) -> Self {
        let fusion = FusionEncoder::new(fusion_spec, rng);
        let mut layers: Vec<(usize, Activation)> =
            hidden.iter().map(|&w| (w, Activation::Relu)).collect();
        layers.push((action_dim, Activation::Tanh));
        let mut head = Mlp::new(fusion.feature_dim(), &layers, rng);
        // Small final-layer init keeps early actions near zero instead of
        // saturating the tanh.
        head.reinit_final(Init::Uniform(3e-3), rng);
        Self { fusion, head }
    }

    #[inline]
    pub fn action_dim(&self) -> usize {
        self.head.out_dim()
    }

    pub fn num_params(&self) -> usize {
        self.fusion.num_params() + self.head.num_params()
    }

    /// Compute the action for `obs`; also leaves attention weights in
    /// `scratch` for inspection.
    pub fn forward<'s>(&self, obs: &Obs, scratch: &'s mut ActorScratch) -> &'s [f64] {
        self.fusion
            .forward(&obs.views, obs.mask_opt(), &mut scratch.fusion);
        self.head.forward(scratch.fusion.fused(), &mut scratch.head);
        scratch.head.output()
    }

    /// Backprop `d_action` through head and fusion, accumulating into
    /// `grads`.
    pub fn backward(
        &self,
        obs: &Obs,
        scratch: &mut ActorScratch,
        d_action: &[f64],
        grads: &mut ActorGrads,
    ) {
        self.head.backward(
            scratch.fusion.fused(),
            &mut scratch.head,
            d_action,
            Some(&mut scratch.d_fused),
            &mut grads.head,
        );
        self.fusion.backward(
            &obs.views,
            obs.mask_opt(),
            &mut scratch.fusion,
            &scratch.d_fused,
            &mut grads.fusion,
            None,
        );
    }

    pub fn soft_update_from(&mut self, src: &Self, tau: f64) {
        self.fusion.soft_update_from(&src.fusion, tau);
        self.head.soft_update_from(&src.head, tau);
    }

    pub fn param_grad_pairs<'a>(
        &'a mut self,
        grads: &'a ActorGrads,
    ) -> Vec<(&'a mut [f64], &'a [f64])> {
        let mut pairs = self.fusion.param_grad_pairs(&grads.fusion);
        pairs.extend(self.head.param_grad_pairs(&grads.head));
        pairs
    }
}

impl ActorScratch {
    pub fn new(actor: &Actor) -> Self {
        Self {
            fusion: FusionScratch::new(&actor.fusion),
            head: MlpScratch::for_mlp(&actor.head),
            d_fused: vec![0.0; actor.fusion.feature_dim()],
        }
    }

    /// Attention weights of the latest `forward`.
    #[inline]
    pub fn attention_weights(&self) -> &[f64] {
        self.fusion.attention_weights()
    }
}

impl ActorGrads {
    pub fn zeroed(actor: &Actor) -> Self {
        Self {
            fusion: FusionGrads::zeroed(&actor.fusion),
            head: MlpGrads::zeroed(&actor.head),
        }
    }

    pub fn zero(&mut self) {
        self.fusion.zero();
        self.head.zero();
    }

    pub fn norm_sq(&self) -> f64 {
        self.fusion.norm_sq() + self.head.norm_sq()
    }

    pub fn scale(&mut self, factor: f64) {
        self.fusion.scale(factor);
        self.head.scale(factor);
    }
}
