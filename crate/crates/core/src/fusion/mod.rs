//! Attention-based fusion of multi-view observations.

mod encoder;
mod pool;

pub use encoder::{FusionEncoder, FusionGrads, FusionScratch, FusionSpec};
pub use pool::{attention_entropy, AttentionPool, PoolGrads, PoolScratch};
