//! Training metrics and CSV logging.

use std::fs::File;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::Result;

/// Per-episode training metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub episode: usize,
    /// Steps in this episode.
    pub steps: usize,
    /// Environment steps consumed so far across the run.
    pub total_env_steps: usize,
    /// Undiscounted episode return.
    #[serde(rename = "return")]
    pub ret: f64,
    /// Mean critic TD loss over this episode's updates; NaN before learning
    /// starts.
    pub critic_loss: f64,
    /// Mean actor loss (negative mean Q) over this episode's updates.
    pub actor_loss: f64,
    /// Mean attention entropy of the actor over this episode, in nats.
    pub attn_entropy: f64,
}

/// Streaming CSV writer for any serializable record type.
pub struct CsvLogger<T: Serialize> {
    writer: csv::Writer<File>,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Serialize> CsvLogger<T> {
    pub fn create<P: AsRef<Path>>(path: P) -> Result<Self> {
        Ok(Self {
            writer: csv::Writer::from_writer(File::create(path)?),
            _marker: std::marker::PhantomData,
        })
    }

    pub fn log(&mut self, record: &T) -> Result<()> {
        self.writer.serialize(record)?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

/// Read back a whole CSV of records, e.g. for summaries or tests.
pub fn read_records<T: DeserializeOwned, P: AsRef<Path>>(path: P) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Mean of a slice; NaN when empty.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Sample standard deviation; zero for fewer than two samples.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}
