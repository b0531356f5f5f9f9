use crate::error::Result;
use crate::kn::KnModel;
use crate::nnlm::NnlmModel;
use crate::text::ContextSample;

/// Conditional next-word distribution shared by the neural and n-gram models.
/// `exp(log_prob)` sums to 1 over the vocabulary for every context.
pub trait LanguageModel: Send + Sync {
    fn order(&self) -> usize;

    fn vocab_size(&self) -> usize;

    /// Natural log of P(target | context).
    fn log_prob(&self, context: &[u32], target: u32) -> Result<f64>;

    fn total_log_prob(&self, samples: &[ContextSample]) -> Result<f64> {
        let mut sum = CompensatedSum::default();
        for s in samples {
            sum.add(self.log_prob(&s.context, s.target)?);
        }
        Ok(sum.value())
    }
}

/// Neumaier summation; long texts add thousands of similar-sized log terms.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl LanguageModel for NnlmModel {
    fn order(&self) -> usize {
        self.config.order
    }

    fn vocab_size(&self) -> usize {
        self.config.vocab_size
    }

    fn log_prob(&self, context: &[u32], target: u32) -> Result<f64> {
        NnlmModel::log_prob(self, context, target)
    }

    fn total_log_prob(&self, samples: &[ContextSample]) -> Result<f64> {
        NnlmModel::total_log_prob(self, samples)
    }
}

impl LanguageModel for KnModel {
    fn order(&self) -> usize {
        KnModel::order(self)
    }

    fn vocab_size(&self) -> usize {
        KnModel::vocab_size(self)
    }

    fn log_prob(&self, context: &[u32], target: u32) -> Result<f64> {
        KnModel::log_prob(self, context, target)
    }
}
