//! Perplexity, attribution and experiment sweeps.

mod aggregate;
mod classify;
mod lm;
mod perplexity;
mod sweep;

pub use aggregate::{aggregate_over_seeds, MeanStd};
pub use classify::{argmin, classify, AuthorModel, ClassificationResult};
pub use lm::LanguageModel;
pub use perplexity::{perplexity, PerplexityReport};
pub use sweep::{
    accuracy_sweep, score_table, ExperimentReport, MethodModels, ScoreTable, SweepConfig, TrialOutcome,
};
