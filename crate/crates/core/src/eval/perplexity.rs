use crate::error::{Error, Result};
use crate::text::samples_from_sentences;

use super::lm::LanguageModel;

/// Log-likelihood summary of a token stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerplexityReport {
    /// Number of scored positions (every non-start position, end tokens included).
    pub tokens: usize,
    /// Sum of natural-log probabilities.
    pub total_log_prob: f64,
}

impl PerplexityReport {
    pub fn perplexity(&self) -> f64 {
        (-self.total_log_prob / self.tokens as f64).exp()
    }

    pub fn mean_cross_entropy(&self) -> f64 {
        -self.total_log_prob / self.tokens as f64
    }

    /// Pools two reports as one token stream.
    pub fn merge(self, other: PerplexityReport) -> PerplexityReport {
        PerplexityReport {
            tokens: self.tokens + other.tokens,
            total_log_prob: self.total_log_prob + other.total_log_prob,
        }
    }
}

/// Scores padded id sentences, working in log space throughout.
pub fn perplexity<M: LanguageModel + ?Sized>(model: &M, sentences: &[Vec<u32>]) -> Result<PerplexityReport> {
    let samples = samples_from_sentences(sentences, model.order());
    if samples.is_empty() {
        return Err(Error::NoTokens);
    }
    Ok(PerplexityReport {
        tokens: samples.len(),
        total_log_prob: model.total_log_prob(&samples)?,
    })
}
