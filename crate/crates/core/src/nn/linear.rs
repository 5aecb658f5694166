//! Dense layer: `y = activation(W x + b)`.
//!
//! Weights are stored row-major with shape `(out_dim, in_dim)`. Shape
//! mismatches are programmer error and panic via `assert_eq!`.

use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Activation;

/// Weight initialization scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Init {
    Zeros,
    /// Xavier/Glorot uniform: `U(-sqrt(6/(fan_in+fan_out)), +...)`.
    ///
    /// Default for tanh, sigmoid, and identity layers.
    Xavier,
    /// He/Kaiming uniform: `U(-sqrt(6/fan_in), +...)`.
    ///
    /// Default for ReLU layers.
    He,
    /// `U(-limit, +limit)` with an explicit limit.
    ///
    /// Used for small-magnitude output layers of policy and value heads.
    Uniform(f64),
}

impl Init {
    /// The conventional default init for a given activation.
    pub fn default_for(activation: Activation) -> Self {
        match activation {
            Activation::Relu => Init::He,
            _ => Init::Xavier,
        }
    }
}

/// A dense layer with its activation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Linear {
    in_dim: usize,
    out_dim: usize,
    activation: Activation,
    /// Row-major, shape `(out_dim, in_dim)`.
    weights: Vec<f64>,
    biases: Vec<f64>,
}

/// Gradient accumulator matching a [`Linear`] layer.
#[derive(Debug, Clone)]
pub struct LinearGrads {
    pub d_weights: Vec<f64>,
    pub d_biases: Vec<f64>,
}

impl LinearGrads {
    pub fn zeroed(layer: &Linear) -> Self {
        Self {
            d_weights: vec![0.0; layer.weights.len()],
            d_biases: vec![0.0; layer.biases.len()],
        }
    }

    pub fn zero(&mut self) {
        self.d_weights.fill(0.0);
        self.d_biases.fill(0.0);
    }
}

impl Linear {
    pub fn new<R: Rng + ?Sized>(
        in_dim: usize,
        out_dim: usize,
        activation: Activation,
        init: Init,
        rng: &mut R,
    ) -> Self {
        assert!(in_dim > 0 && out_dim > 0, "layer dims must be > 0");

        let mut weights = vec![0.0; in_dim * out_dim];
        let limit = match init {
            Init::Zeros => 0.0,
            Init::Xavier => (6.0 / (in_dim + out_dim) as f64).sqrt(),
            Init::He => (6.0 / in_dim as f64).sqrt(),
            Init::Uniform(limit) => limit,
        };
        if limit > 0.0 {
            let dist = Uniform::new(-limit, limit);
            for w in &mut weights {
                *w = dist.sample(rng);
            }
        }

        Self {
            in_dim,
            out_dim,
            activation,
            weights,
            biases: vec![0.0; out_dim],
        }
    }

    #[inline]
    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    #[inline]
    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    #[inline]
    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn num_params(&self) -> usize {
        self.weights.len() + self.biases.len()
    }

    /// Row-major weights, laid out `(out_dim, in_dim)`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn biases_mut(&mut self) -> &mut [f64] {
        &mut self.biases
    }

    /// Reinitialize weights and biases with `init`.
    pub fn reinit<R: Rng + ?Sized>(&mut self, init: Init, rng: &mut R) {
        let fresh = Linear::new(self.in_dim, self.out_dim, self.activation, init, rng);
        self.weights = fresh.weights;
        self.biases = fresh.biases;
    }

    /// Forward pass for a single sample.
    ///
    /// `outputs` is overwritten with `activation(W * inputs + b)`.
    #[inline]
    pub fn forward(&self, inputs: &[f64], outputs: &mut [f64]) {
        assert_eq!(inputs.len(), self.in_dim, "linear forward: input dim");
        assert_eq!(outputs.len(), self.out_dim, "linear forward: output dim");

        for (o, out) in outputs.iter_mut().enumerate() {
            let row = &self.weights[o * self.in_dim..(o + 1) * self.in_dim];
            let mut z = self.biases[o];
            for (&w, &x) in row.iter().zip(inputs) {
                z = w.mul_add(x, z);
            }
            *out = self.activation.forward(z);
        }
    }

    /// Backward pass for a single sample.
    ///
    /// Semantics:
    /// - `grads` is accumulated into (`+=`), so mini-batch loops can sum
    ///   per-sample contributions without extra buffers.
    /// - `d_inputs`, when present, is overwritten.
    ///
    /// `outputs` must be the post-activation values produced by `forward`
    /// for the same `inputs`.
    pub fn backward(
        &self,
        inputs: &[f64],
        outputs: &[f64],
        d_outputs: &[f64],
        mut d_inputs: Option<&mut [f64]>,
        grads: &mut LinearGrads,
    ) {
        assert_eq!(inputs.len(), self.in_dim, "linear backward: input dim");
        assert_eq!(outputs.len(), self.out_dim, "linear backward: output dim");
        assert_eq!(
            d_outputs.len(),
            self.out_dim,
            "linear backward: d_output dim"
        );
        assert_eq!(grads.d_weights.len(), self.weights.len());
        assert_eq!(grads.d_biases.len(), self.out_dim);

        if let Some(d_in) = d_inputs.as_deref_mut() {
            assert_eq!(d_in.len(), self.in_dim, "linear backward: d_input dim");
            d_in.fill(0.0);
        }

        for o in 0..self.out_dim {
            let d_z = d_outputs[o] * self.activation.grad_from_output(outputs[o]);
            if d_z == 0.0 {
                continue;
            }
            grads.d_biases[o] += d_z;

            let row = o * self.in_dim;
            for (i, &x) in inputs.iter().enumerate() {
                grads.d_weights[row + i] += d_z * x;
            }
            if let Some(d_in) = d_inputs.as_deref_mut() {
                for (i, d) in d_in.iter_mut().enumerate() {
                    *d = self.weights[row + i].mul_add(d_z, *d);
                }
            }
        }
    }

    /// `theta' <- tau * theta_src + (1 - tau) * theta'`.
    pub fn soft_update_from(&mut self, src: &Self, tau: f64) {
        assert_eq!(self.in_dim, src.in_dim);
        assert_eq!(self.out_dim, src.out_dim);
        for (d, &s) in self.weights.iter_mut().zip(&src.weights) {
            *d = tau * s + (1.0 - tau) * *d;
        }
        for (d, &s) in self.biases.iter_mut().zip(&src.biases) {
            *d = tau * s + (1.0 - tau) * *d;
        }
    }

    /// Parameter/gradient slice pairs in a stable order (weights, biases).
    pub fn param_grad_pairs<'a>(
        &'a mut self,
        grads: &'a LinearGrads,
    ) -> [(&'a mut [f64], &'a [f64]); 2] {
        [
            (&mut self.weights[..], &grads.d_weights[..]),
            (&mut self.biases[..], &grads.d_biases[..]),
        ]
    }
}
