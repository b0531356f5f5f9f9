//! Text preparation: raw author corpora to padded id sequences and samples.

mod corpus;
mod porter;
mod split;
mod synth;
mod tokenize;
mod vocab;

pub use corpus::{
    encode, encode_sentence, read_vocabulary, samples_from_sentences, write_vocabulary,
    ContextSample, PipelineParams, ProcessedCorpus, RawCorpus,
};
pub use porter::porter_stem;
pub use split::{SplitAssignment, SplitPart, DEFAULT_RATIOS};
pub use synth::{generate_synthetic_corpus, synthetic_lexicon, MarkovSpec};
pub use tokenize::tokenize;
pub use vocab::{Vocabulary, RESERVED, SENTENCE_END, SENTENCE_START, UNKNOWN};
