//! Training loops: single-thread, parallel collection, and seed sweeps.

mod parallel;
mod sweep;
mod trainer;

pub use parallel::{train_parallel, ParallelConfig, ParallelReport, WorkerEpisode};
pub use sweep::{
    aggregate, sweep, write_sweep_csv, SeedSummary, SweepAggregate, SweepConfig, SweepRecord,
};
pub use trainer::{EvalReport, TrainConfig, Trainer};
