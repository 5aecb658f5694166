//! Uniform experience replay.

use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::obs::Obs;

/// One environment step as stored in replay.
///
/// `action` is in the normalized `[-1, 1]` policy range, not environment
/// units, so the critic always sees the same scale the actor emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub obs: Obs,
    pub action: Vec<f64>,
    pub reward: f64,
    pub next_obs: Obs,
    pub done: bool,
}

/// Fixed-capacity ring buffer with uniform sampling.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    items: Vec<Transition>,
    head: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be > 0");
        Self {
            capacity,
            items: Vec::with_capacity(capacity),
            head: 0,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Append a transition, evicting the oldest once at capacity.
    pub fn push(&mut self, t: Transition) {
        if self.items.len() < self.capacity {
            self.items.push(t);
        } else {
            self.items[self.head] = t;
            self.head = (self.head + 1) % self.capacity;
        }
    }

    /// Sample `n` transitions uniformly with replacement.
    pub fn sample<'a, R: Rng + ?Sized>(&'a self, rng: &mut R, n: usize) -> Vec<&'a Transition> {
        assert!(!self.items.is_empty(), "cannot sample from empty replay");
        let dist = Uniform::from(0..self.items.len());
        (0..n).map(|_| &self.items[dist.sample(rng)]).collect()
    }
}
