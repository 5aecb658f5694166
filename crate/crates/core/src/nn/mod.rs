//! From-scratch neural network primitives: dense layers, MLPs with manual
//! backprop, and first-order optimizers.

mod activation;
mod linear;
mod mlp;
mod optim;

pub use activation::Activation;
pub use linear::{Init, Linear, LinearGrads};
pub use mlp::{Mlp, MlpGrads, MlpScratch};
pub use optim::{Adam, Sgd};
