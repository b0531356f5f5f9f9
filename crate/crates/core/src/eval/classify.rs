use crate::error::{Error, Result};
use crate::text::{encode_sentence, Vocabulary};

use super::lm::LanguageModel;
use super::perplexity::{perplexity, PerplexityReport};

/// One candidate author: a trained model and the vocabulary it was trained on.
pub struct AuthorModel {
    pub author: String,
    pub vocabulary: Vocabulary,
    pub model: Box<dyn LanguageModel>,
}

impl AuthorModel {
    pub fn new(author: impl Into<String>, vocabulary: Vocabulary, model: Box<dyn LanguageModel>) -> Self {
        AuthorModel {
            author: author.into(),
            vocabulary,
            model,
        }
    }

    /// Encodes word sentences under this author's vocabulary and scores them.
    pub fn score<S: AsRef<str>>(&self, sentences: &[Vec<S>]) -> Result<PerplexityReport> {
        let order = self.model.order();
        let ids: Vec<Vec<u32>> = sentences
            .iter()
            .map(|s| encode_sentence(s, &self.vocabulary, order))
            .collect();
        perplexity(self.model.as_ref(), &ids)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub true_author: Option<usize>,
    pub predicted: usize,
    /// Pooled perplexity of the test text under each candidate, in candidate order.
    pub perplexities: Vec<f64>,
}

impl ClassificationResult {
    pub fn is_correct(&self) -> bool {
        self.true_author == Some(self.predicted)
    }
}

/// Index of the smallest value; the lowest index wins ties.
pub fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Attributes `sentences` (stemmed word lists) to the candidate whose model
/// gives the pooled text the lowest perplexity.
pub fn classify<S: AsRef<str>>(
    models: &[AuthorModel],
    sentences: &[Vec<S>],
    true_author: Option<usize>,
) -> Result<ClassificationResult> {
    if models.is_empty() {
        return Err(Error::invalid("no candidate models"));
    }
    if sentences.is_empty() {
        return Err(Error::invalid("classification needs at least one sentence"));
    }
    let perplexities = models
        .iter()
        .map(|m| m.score(sentences).map(|r| r.perplexity()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ClassificationResult {
        true_author,
        predicted: argmin(&perplexities),
        perplexities,
    })
}
