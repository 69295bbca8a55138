//! Adam optimizer over a named parameter set.

use super::{NumericsError, ParamSet, Result};

/// Adam hyperparameters. Defaults are the community standard; the step
/// count starts at zero and bias correction is applied from the first step.
#[derive(Debug, Clone)]
pub struct AdamConfig {
    pub lr: f32,
    pub beta1: f32,
    pub beta2: f32,
    pub eps: f32,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Optimizer state: first/second moment accumulators per parameter plus the
/// global step count. Moment buffers always match the parameter shapes.
#[derive(Debug, Clone)]
pub struct Adam {
    pub cfg: AdamConfig,
    step: u64,
    m: Vec<Vec<f32>>,
    v: Vec<Vec<f32>>,
}

impl Adam {
    pub fn new(cfg: AdamConfig, params: &ParamSet) -> Self {
        let m = (0..params.len())
            .map(|i| vec![0.0; params.tensor(i).numel()])
            .collect();
        let v = (0..params.len())
            .map(|i| vec![0.0; params.tensor(i).numel()])
            .collect();
        Self {
            cfg,
            step: 0,
            m,
            v,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// One Adam update. `grads` must be aligned with the parameter order.
    /// A non-finite gradient aborts the step and names the parameter.
    pub fn step(&mut self, params: &mut ParamSet, grads: &[Vec<f32>]) -> Result<()> {
        assert_eq!(grads.len(), params.len(), "gradient set size mismatch");
        for i in 0..params.len() {
            if grads[i].iter().any(|g| !g.is_finite()) {
                return Err(NumericsError::NonFinite {
                    name: params.name(i).to_string(),
                });
            }
        }
        self.step += 1;
        let t = self.step as f64;
        let b1 = f64::from(self.cfg.beta1);
        let b2 = f64::from(self.cfg.beta2);
        let bias1 = (1.0 - b1.powf(t)) as f32;
        let bias2 = (1.0 - b2.powf(t)) as f32;
        for i in 0..params.len() {
            let m = &mut self.m[i];
            let v = &mut self.v[i];
            let g = &grads[i];
            let w = params.tensor_mut(i).data_mut();
            debug_assert_eq!(w.len(), g.len());
            for j in 0..w.len() {
                m[j] = self.cfg.beta1 * m[j] + (1.0 - self.cfg.beta1) * g[j];
                v[j] = self.cfg.beta2 * v[j] + (1.0 - self.cfg.beta2) * g[j] * g[j];
                let m_hat = m[j] / bias1;
                let v_hat = v[j] / bias2;
                w[j] -= self.cfg.lr * m_hat / (v_hat.sqrt() + self.cfg.eps);
            }
        }
        Ok(())
    }
}
