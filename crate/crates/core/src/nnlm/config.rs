use crate::error::{Error, Result};

/// Hyperparameters of the feed-forward language model.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct NnlmConfig {
    /// n-gram order; the network sees `order - 1` context words.
    pub order: usize,
    pub vocab_size: usize,
    pub embed_dim: usize,
    pub hidden_dim: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Epochs without validation improvement before stopping early.
    pub patience: usize,
    pub seed: u64,
    /// Weights start uniform in `(-init_scale, init_scale)`.
    pub init_scale: f64,
}

impl Default for NnlmConfig {
    fn default() -> Self {
        NnlmConfig {
            order: 4,
            vocab_size: 4,
            embed_dim: 50,
            hidden_dim: 200,
            learning_rate: 0.1,
            momentum: 0.9,
            batch_size: 100,
            max_epochs: 20,
            patience: 3,
            seed: 0,
            init_scale: 0.1,
        }
    }
}

impl NnlmConfig {
    pub fn new(order: usize, vocab_size: usize) -> Self {
        NnlmConfig {
            order,
            vocab_size,
            ..Default::default()
        }
    }

    pub fn context_len(&self) -> usize {
        self.order - 1
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidArgument(m));
        if self.order < 2 {
            return fail(format!("order must be >= 2, got {}", self.order));
        }
        if self.vocab_size < 4 {
            return fail(format!("vocab_size must be >= 4, got {}", self.vocab_size));
        }
        if self.embed_dim == 0 || self.hidden_dim == 0 || self.batch_size == 0 {
            return fail("embed_dim, hidden_dim and batch_size must be >= 1".into());
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return fail(format!("momentum must be in [0, 1), got {}", self.momentum));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail(format!("learning rate must be > 0, got {}", self.learning_rate));
        }
        if !(self.init_scale >= 0.0 && self.init_scale.is_finite()) {
            return fail(format!("init_scale must be >= 0, got {}", self.init_scale));
        }
        Ok(())
    }
}
