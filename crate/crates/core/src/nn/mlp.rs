//! A dense feed-forward network with manual backprop.
//!
//! The hot path is allocation-free: callers allocate an [`MlpScratch`] once
//! and reuse it across forward/backward calls.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Activation, Init, Linear, LinearGrads};

/// A stack of dense layers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mlp {
    in_dim: usize,
    layers: Vec<Linear>,
}

/// Reusable forward/backward workspace for one [`Mlp`].
#[derive(Debug, Clone)]
pub struct MlpScratch {
    /// Post-activation outputs, one buffer per layer.
    acts: Vec<Vec<f64>>,
    /// Ping-pong buffers for upstream gradients during backward.
    d_a: Vec<f64>,
    d_b: Vec<f64>,
}

/// Gradient accumulators, one per layer.
#[derive(Debug, Clone)]
pub struct MlpGrads {
    layers: Vec<LinearGrads>,
}

impl Mlp {
    /// Build a network mapping `in_dim` inputs through the given
    /// `(width, activation)` layers. Weights use the conventional default
    /// init for each activation (He for ReLU, Xavier otherwise).
    pub fn new<R: Rng + ?Sized>(
        in_dim: usize,
        layers: &[(usize, Activation)],
        rng: &mut R,
    ) -> Self {
        assert!(!layers.is_empty(), "mlp needs at least one layer");
        let mut built = Vec::with_capacity(layers.len());
        let mut prev = in_dim;
        for &(width, activation) in layers {
            let init = Init::default_for(activation);
            built.push(Linear::new(prev, width, activation, init, rng));
            prev = width;
        }
        Self {
            in_dim,
            layers: built,
        }
    }

    /// Reinitialize the final layer. Policy and value heads conventionally
    /// start with small uniform weights so initial outputs stay near zero.
    pub fn reinit_final<R: Rng + ?Sized>(&mut self, init: Init, rng: &mut R) {
        self.layers
            .last_mut()
            .expect("mlp has layers")
            .reinit(init, rng);
    }

    #[inline]
    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    #[inline]
    pub fn out_dim(&self) -> usize {
        self.layers.last().expect("mlp has layers").out_dim()
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(Linear::num_params).sum()
    }

    /// Widest buffer any forward/backward pass needs.
    fn max_width(&self) -> usize {
        self.layers
            .iter()
            .map(Linear::out_dim)
            .max()
            .unwrap_or(0)
            .max(self.in_dim)
    }

    /// Forward pass; activations land in `scratch` and the network output is
    /// available as `scratch.output()`.
    pub fn forward<'s>(&self, input: &[f64], scratch: &'s mut MlpScratch) -> &'s [f64] {
        assert_eq!(input.len(), self.in_dim, "mlp forward: input dim");
        assert_eq!(scratch.acts.len(), self.layers.len(), "scratch mismatch");

        for (l, layer) in self.layers.iter().enumerate() {
            let (head, tail) = scratch.acts.split_at_mut(l);
            let layer_in = if l == 0 { input } else { &head[l - 1] };
            layer.forward(layer_in, &mut tail[0]);
        }
        scratch.output()
    }

    /// Backward pass for the sample most recently run through `forward` with
    /// this same `scratch`.
    ///
    /// Parameter gradients are accumulated into `grads` (`+=`); `d_input`,
    /// when present, is overwritten with `dL/d(input)`.
    pub fn backward(
        &self,
        input: &[f64],
        scratch: &mut MlpScratch,
        d_output: &[f64],
        mut d_input: Option<&mut [f64]>,
        grads: &mut MlpGrads,
    ) {
        assert_eq!(d_output.len(), self.out_dim(), "mlp backward: d_output dim");
        assert_eq!(grads.layers.len(), self.layers.len(), "grads mismatch");
        if let Some(d_in) = d_input.as_deref_mut() {
            assert_eq!(d_in.len(), self.in_dim, "mlp backward: d_input dim");
        }

        let MlpScratch { acts, d_a, d_b } = scratch;
        d_a[..d_output.len()].copy_from_slice(d_output);
        let mut cur_in_a = true;

        for (l, layer) in self.layers.iter().enumerate().rev() {
            let layer_in = if l == 0 { input } else { &acts[l - 1] };
            let (d_cur, d_next): (&[f64], &mut [f64]) = if cur_in_a {
                (&d_a[..layer.out_dim()], &mut d_b[..])
            } else {
                (&d_b[..layer.out_dim()], &mut d_a[..])
            };

            if l == 0 {
                layer.backward(
                    layer_in,
                    &acts[l],
                    d_cur,
                    d_input.as_deref_mut(),
                    &mut grads.layers[l],
                );
            } else {
                layer.backward(
                    layer_in,
                    &acts[l],
                    d_cur,
                    Some(&mut d_next[..layer.in_dim()]),
                    &mut grads.layers[l],
                );
                cur_in_a = !cur_in_a;
            }
        }
    }

    /// `theta' <- tau * theta_src + (1 - tau) * theta'` across every layer.
    pub fn soft_update_from(&mut self, src: &Self, tau: f64) {
        assert_eq!(self.layers.len(), src.layers.len());
        for (dst, s) in self.layers.iter_mut().zip(&src.layers) {
            dst.soft_update_from(s, tau);
        }
    }

    /// Parameter/gradient slice pairs in stable layer order.
    pub fn param_grad_pairs<'a>(
        &'a mut self,
        grads: &'a MlpGrads,
    ) -> Vec<(&'a mut [f64], &'a [f64])> {
        let mut pairs = Vec::with_capacity(self.layers.len() * 2);
        for (layer, g) in self.layers.iter_mut().zip(&grads.layers) {
            pairs.extend(layer.param_grad_pairs(g));
        }
        pairs
    }

    pub fn layers(&self) -> &[Linear] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Linear] {
        &mut self.layers
    }
}

impl MlpScratch {
    pub fn for_mlp(mlp: &Mlp) -> Self {
        let width = mlp.max_width();
        Self {
            acts: mlp.layers.iter().map(|l| vec![0.0; l.out_dim()]).collect(),
            d_a: vec![0.0; width],
            d_b: vec![0.0; width],
        }
    }

    /// Output of the latest `forward` call.
    #[inline]
    pub fn output(&self) -> &[f64] {
        self.acts.last().expect("mlp has layers")
    }
}

impl MlpGrads {
    pub fn zeroed(mlp: &Mlp) -> Self {
        Self {
            layers: mlp.layers.iter().map(LinearGrads::zeroed).collect(),
        }
    }

    pub fn zero(&mut self) {
        for g in &mut self.layers {
            g.zero();
        }
    }

    /// Squared L2 norm over all parameter gradients.
    pub fn norm_sq(&self) -> f64 {
        self.layers
            .iter()
            .map(|g| {
                g.d_weights.iter().map(|v| v * v).sum::<f64>()
                    + g.d_biases.iter().map(|v| v * v).sum::<f64>()
            })
            .sum()
    }

    pub fn scale(&mut self, factor: f64) {
        for g in &mut self.layers {
            for v in &mut g.d_weights {
                *v *= factor;
            }
            for v in &mut g.d_biases {
                *v *= factor;
            }
        }
    }
}
