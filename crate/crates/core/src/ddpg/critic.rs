//! Action-value network.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fusion::{FusionEncoder, FusionGrads, FusionScratch, FusionSpec};
use crate::nn::{Activation, Init, Mlp, MlpGrads, MlpScratch};
use crate::obs::Obs;

/// Critic `Q(obs, action)`: fusion front end, then an MLP over the fused
/// features concatenated with the action.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Critic {
    fusion: FusionEncoder,
    head: Mlp,
    action_dim: usize,
}

#[derive(Debug, Clone)]
pub struct CriticScratch {
    fusion: FusionScratch,
    head: MlpScratch,
    /// Concatenated `[fused, action]` head input.
    input: Vec<f64>,
    d_input: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct CriticGrads {
    fusion: FusionGrads,
    head: MlpGrads,
}

impl Critic {
    pub fn new<R: Rng + ?Sized>(
        fusion_spec: FusionSpec,
        hidden: &[usize],
        action_dim: usize,
        rng: &mut R,
    ) -> Self {
        let fusion = FusionEncoder::new(fusion_spec, rng);
        let mut layers: Vec<(usize, Activation)> =
            hidden.iter().map(|&w| (w, Activation::Relu)).collect();
        layers.push((1, Activation::Identity));
        let mut head = Mlp::new(fusion.feature_dim() + action_dim, &layers, rng);
        head.reinit_final(Init::Uniform(3e-3), rng);
        Self {
            fusion,
            head,
            action_dim,
        }
    }

    pub fn num_params(&self) -> usize {
        self.fusion.num_params() + self.head.num_params()
    }

    /// Q-value for `(obs, action)`.
    pub fn forward(&self, obs: &Obs, action: &[f64], scratch: &mut CriticScratch) -> f64 {
        assert_eq!(action.len(), self.action_dim, "critic action dim");
        self.fusion
            .forward(&obs.views, obs.mask_opt(), &mut scratch.fusion);

        let f = self.fusion.feature_dim();
        scratch.input[..f].copy_from_slice(scratch.fusion.fused());
        scratch.input[f..].copy_from_slice(action);
        self.head.forward(&scratch.input, &mut scratch.head);
        scratch.head.output()[0]
    }

    /// Backprop `d_q` through head and fusion.
    ///
    /// Parameter gradients accumulate into `grads`. `d_action`, when
    /// present, is overwritten with `dQ/d(action) * d_q`, which is what the
    /// policy update needs.
    pub fn backward(
        &self,
        obs: &Obs,
        scratch: &mut CriticScratch,
        d_q: f64,
        grads: &mut CriticGrads,
        d_action: Option<&mut [f64]>,
    ) {
        self.head.backward(
            &scratch.input,
            &mut scratch.head,
            &[d_q],
            Some(&mut scratch.d_input),
            &mut grads.head,
        );

        let f = self.fusion.feature_dim();
        if let Some(d_a) = d_action {
            d_a.copy_from_slice(&scratch.d_input[f..]);
        }
        self.fusion.backward(
            &obs.views,
            obs.mask_opt(),
            &mut scratch.fusion,
            &scratch.d_input[..f],
            &mut grads.fusion,
            None,
        );
    }

    /// Attention weights of the latest `forward`.
    pub fn soft_update_from(&mut self, src: &Self, tau: f64) {
        self.fusion.soft_update_from(&src.fusion, tau);
        self.head.soft_update_from(&src.head, tau);
    }

    pub fn param_grad_pairs<'a>(
        &'a mut self,
        grads: &'a CriticGrads,
    ) -> Vec<(&'a mut [f64], &'a [f64])> {
        let mut pairs = self.fusion.param_grad_pairs(&grads.fusion);
        pairs.extend(self.head.param_grad_pairs(&grads.head));
        pairs
    }
}

impl CriticScratch {
    pub fn new(critic: &Critic) -> Self {
        let in_dim = critic.fusion.feature_dim() + critic.action_dim;
        Self {
            fusion: FusionScratch::new(&critic.fusion),
            head: MlpScratch::for_mlp(&critic.head),
            input: vec![0.0; in_dim],
            d_input: vec![0.0; in_dim],
        }
    }
}

impl CriticGrads {
    pub fn zeroed(critic: &Critic) -> Self {
        Self {
            fusion: FusionGrads::zeroed(&critic.fusion),
            head: MlpGrads::zeroed(&critic.head),
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
