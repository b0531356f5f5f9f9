//! Per-author data preparation and model training used by the CLI and the
//! end-to-end tests.

use crate::error::Result;
use crate::kn::KnModel;
use crate::nnlm::{self, NnlmConfig, TrainOutcome};
use crate::rng;
use crate::text::{ContextSample, PipelineParams, ProcessedCorpus, RawCorpus, SplitAssignment};

/// One author's processed corpus together with one seeded split.
#[derive(Debug, Clone)]
pub struct AuthorSplit {
    pub author: String,
    /// Stemmed word sentences, aligned with `processed.sentences`.
    pub words: Vec<Vec<String>>,
    pub processed: ProcessedCorpus,
    pub split: SplitAssignment,
}

impl AuthorSplit {
    pub fn prepare(raw: &RawCorpus, params: &PipelineParams, seed: u64, ratios: [f64; 3]) -> Result<Self> {
        let (words, processed) = params.prepare(raw)?;
        Self::from_processed(raw.author_id.clone(), words, processed, seed, ratios)
    }

    pub fn from_processed(
        author: String,
        words: Vec<Vec<String>>,
        processed: ProcessedCorpus,
        seed: u64,
        ratios: [f64; 3],
    ) -> Result<Self> {
        let split = SplitAssignment::new(processed.len(), seed, ratios)?;
        Ok(AuthorSplit {
            author,
            words,
            processed,
            split,
        })
    }

    pub fn train_samples(&self) -> Vec<ContextSample> {
        self.processed.extract_samples(&self.split.train)
    }

    pub fn validation_samples(&self) -> Vec<ContextSample> {
        self.processed.extract_samples(&self.split.validation)
    }

    pub fn test_sentences(&self) -> Vec<Vec<u32>> {
        self.processed.select(&self.split.test)
    }

    pub fn test_words(&self) -> Vec<Vec<String>> {
        self.split.test.iter().map(|&i| self.words[i].clone()).collect()
    }

    /// Config for this author's network: order and vocabulary size from the
    /// corpus, init/shuffle seed derived from the base seed and the split seed.
    pub fn nnlm_config(&self, base: &NnlmConfig) -> NnlmConfig {
        NnlmConfig {
            order: self.processed.order(),
            vocab_size: self.processed.vocabulary.len(),
            seed: rng::derive_seed(base.seed, &[self.split.seed]),
            ..base.clone()
        }
    }

    pub fn train_nnlm(&self, base: &NnlmConfig) -> Result<TrainOutcome> {
        nnlm::train(&self.nnlm_config(base), &self.train_samples(), &self.validation_samples())
    }

    pub fn train_kn(&self) -> Result<KnModel> {
        KnModel::train(
            &self.processed.select(&self.split.train),
            self.processed.order(),
            self.processed.vocabulary.len(),
        )
    }
}
