//! Element-wise activation functions.

use serde::{Deserialize, Serialize};

/// Activation applied after a dense layer's affine transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    /// `y = z`
    Identity,
    /// `y = max(0, z)`
    Relu,
    /// `y = tanh(z)`
    Tanh,
    /// `y = 1 / (1 + exp(-z))`
    Sigmoid,
}

impl Activation {
    #[inline]
    pub fn forward(self, z: f64) -> f64 {
        match self {
            Activation::Identity => z,
            Activation::Relu => z.max(0.0),
            Activation::Tanh => z.tanh(),
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
        }
    }

    /// Derivative `dy/dz` expressed in terms of the activation output `y`.
    ///
    /// All supported activations admit this form, which lets the backward
    /// pass reuse cached outputs instead of pre-activations.
    #[inline]
    pub fn grad_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - y * y,
            Activation::Sigmoid => y * (1.0 - y),
        }
    }
}
