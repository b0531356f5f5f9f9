#![allow(dead_code)]

use authorship_lm::text::{generate_synthetic_corpus, synthetic_lexicon, MarkovSpec, RawCorpus};

/// `n` authors with distinct random bigram chains over one shared lexicon.
pub fn synthetic_authors(n: usize, lexicon: usize, sentences: usize, seed: u64) -> Vec<(MarkovSpec, RawCorpus)> {
    let words = synthetic_lexicon(lexicon, 0);
    (0..n)
        .map(|a| {
            let spec = MarkovSpec::random(words.clone(), 6, 0.12, seed * 1000 + a as u64).unwrap();
            let raw = generate_synthetic_corpus(&format!("author{a:02}"), &spec, seed * 1000 + 500 + a as u64, sentences).unwrap();
            (spec, raw)
        })
        .collect()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
