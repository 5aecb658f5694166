//! First-order optimizers over flat parameter slices.
//!
//! Networks expose `param_grad_pairs` producing `(param, grad)` slice pairs
//! in a stable order; optimizers keep any per-parameter state indexed by
//! that order.

/// Plain stochastic gradient descent: `p -= lr * g`.
#[derive(Debug, Clone)]
pub struct Sgd {
    pub lr: f64,
}

impl Sgd {
    pub fn new(lr: f64) -> Self {
        Self { lr }
    }

    pub fn step(&mut self, pairs: &mut [(&mut [f64], &[f64])]) {
        for (params, grads) in pairs {
            assert_eq!(params.len(), grads.len());
            for (p, &g) in params.iter_mut().zip(grads.iter()) {
                *p -= self.lr * g;
            }
        }
    }
}

/// Adam with bias correction.
///
/// `m = b1*m + (1-b1)*g`, `v = b2*v + (1-b2)*g^2`,
/// `p -= lr * m_hat / (sqrt(v_hat) + eps)`.
#[derive(Debug, Clone)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    t: u64,
    slots: Vec<Slot>,
}

#[derive(Debug, Clone)]
struct Slot {
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Adam {
    pub fn new(lr: f64) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            slots: Vec::new(),
        }
    }

    /// Number of update steps taken so far.
    pub fn steps(&self) -> u64 {
        self.t
    }

    /// Apply one update. The pair list must keep the same shape across calls;
    /// moment buffers are allocated on first use.
    pub fn step(&mut self, pairs: &mut [(&mut [f64], &[f64])]) {
        if self.slots.is_empty() {
            self.slots = pairs
                .iter()
                .map(|(p, _)| Slot {
                    m: vec![0.0; p.len()],
                    v: vec![0.0; p.len()],
                })
                .collect();
        }
        assert_eq!(self.slots.len(), pairs.len(), "optimizer slot mismatch");

        self.t += 1;
        let bias1 = 1.0 - self.beta1.powi(self.t as i32);
        let bias2 = 1.0 - self.beta2.powi(self.t as i32);

        for ((params, grads), slot) in pairs.iter_mut().zip(&mut self.slots) {
            assert_eq!(params.len(), grads.len());
            assert_eq!(params.len(), slot.m.len(), "optimizer slot mismatch");
            for i in 0..params.len() {
                let g = grads[i];
                slot.m[i] = self.beta1 * slot.m[i] + (1.0 - self.beta1) * g;
                slot.v[i] = self.beta2 * slot.v[i] + (1.0 - self.beta2) * g * g;
                let m_hat = slot.m[i] / bias1;
                let v_hat = slot.v[i] / bias2;
                params[i] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
            }
        }
    }
}
