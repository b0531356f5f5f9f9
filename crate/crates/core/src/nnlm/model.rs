use ndarray::Array1;

use crate::error::{Error, Result};
use crate::text::ContextSample;

use super::config::NnlmConfig;
use super::network::{forward, log_distribution};
use super::params::NnlmParams;

/// A trained network with its configuration. Immutable; safe to share.
#[derive(Debug, Clone, PartialEq)]
pub struct NnlmModel {
    pub config: NnlmConfig,
    pub params: NnlmParams,
}

impl NnlmModel {
    pub fn new(config: NnlmConfig, params: NnlmParams) -> Result<Self> {
        config.validate()?;
        let expected = NnlmParams::zeros(&config).shapes();
        if params.shapes() != expected {
            return Err(Error::invalid(format!(
                "parameter shapes {:?} do not match config {:?}",
                params.shapes(),
                expected
            )));
        }
        if !params.all_finite() {
            return Err(Error::invalid("parameters contain non-finite values"));
        }
        Ok(NnlmModel { config, params })
    }

    /// Natural log of P(target | context).
    pub fn log_prob(&self, context: &[u32], target: u32) -> Result<f64> {
        let v = self.config.vocab_size;
        if target as usize >= v {
            return Err(Error::IdOutOfRange { id: target, vocab_size: v });
        }
        Ok(log_distribution(&self.params, context)?[target as usize])
    }

    pub fn log_distribution(&self, context: &[u32]) -> Result<Array1<f64>> {
        log_distribution(&self.params, context)
    }

    /// Sum of target log-probabilities over `samples`, batched.
    pub fn total_log_prob(&self, samples: &[ContextSample]) -> Result<f64> {
        let mut total = 0.0;
        for chunk in samples.chunks(512) {
            let trace = forward(&self.params, chunk)?;
            total += chunk
                .iter()
                .enumerate()
                .map(|(r, s)| trace.log_probs[[r, s.target as usize]])
                .sum::<f64>();
        }
        Ok(total)
    }
}
