//! Per-author language models for closed-set authorship attribution.
//!
//! The crate is split along the pipeline:
//!
//! - [`text`]: tokenization, Porter stemming, vocabulary pruning, id encoding,
//!   seeded train/validation/test splits, and a synthetic Markov corpus generator.
//! - [`nnlm`]: a four-layer feed-forward neural language model (shared word
//!   embeddings, sigmoid hidden layer, softmax output) trained by mini-batch
//!   gradient descent with classical momentum.
//! - [`kn`]: an interpolated Kneser-Ney n-gram baseline with an ARPA-style text format.
//! - [`eval`]: perplexity, attribution by minimum pooled perplexity, accuracy
//!   sweeps over test-text length, confusion matrices and multi-seed aggregation.
//!
//! All randomness goes through [`rng`], which fixes the generator
//! (xoshiro256++ seeded through SplitMix64) so seeds reproduce across platforms.

pub mod error;
mod lines;
pub mod eval;
pub mod experiment;
pub mod kn;
pub mod nnlm;
pub mod rng;
pub mod text;

pub use error::{Error, Result};
pub use text::{ProcessedCorpus, RawCorpus, Vocabulary};

pub use eval::LanguageModel;
pub use kn::KnModel;
pub use nnlm::{NnlmConfig, NnlmModel};
