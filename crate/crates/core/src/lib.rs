//! Multi-view reinforcement learning with attention fusion.
//!
//! This crate implements a deterministic actor-critic agent whose policy and
//! value networks share an attention-based fusion front end over multiple
//! sensor views. Everything numerical is written in plain Rust on `f64`
//! slices: dense layers with manual backprop, softmax attention pooling,
//! Ornstein-Uhlenbeck exploration noise, replay, and soft target updates.
//!
//! The main entry points are:
//!
//! - [`nn`]: dense layers, activations, and optimizers.
//! - [`fusion`]: per-view encoders plus attention pooling.
//! - [`ddpg`]: the actor-critic agent and its update rule.
//! - [`env`]: simulation environments, from probe tasks to multi-view
//!   navigation.
//! - [`train`]: single-thread and parallel training loops plus seed sweeps.

// The numeric kernels walk several parallel buffers under one index; zipped
// iterators would hide that structure.
#![allow(clippy::needless_range_loop)]

pub mod ddpg;
pub mod env;
mod error;
pub mod fusion;
pub mod metrics;
pub mod nn;
pub mod noise;
pub mod obs;
pub mod replay;
pub mod reward;
pub mod train;

pub use error::{Error, Result};
