//! Synthetic authors: first-order Markov chains over a word list.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::{self, Rng};

use super::corpus::RawCorpus;
use super::porter::porter_stem;

/// Transition structure of one synthetic author.
///
/// `start[i]` is the probability that a sentence opens with `words[i]`;
/// `transitions[i]` has `words.len() + 1` entries, the last being the
/// probability of ending the sentence after `words[i]`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MarkovSpec {
    pub words: Vec<String>,
    pub start: Vec<f64>,
    pub transitions: Vec<Vec<f64>>,
    /// Hard cap on sentence length; sampling stops there without an end draw.
    pub max_len: usize,
}

const ROW_TOLERANCE: f64 = 1e-9;

fn check_row(row: &[f64], what: &str) -> Result<()> {
    if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::invalid(format!("{what}: probabilities must be finite and >= 0")));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > ROW_TOLERANCE {
        return Err(Error::invalid(format!("{what}: row sums to {sum}, not 1")));
    }
    Ok(())
}

impl MarkovSpec {
    pub fn validate(&self) -> Result<()> {
        let w = self.words.len();
        if w == 0 {
            return Err(Error::invalid("markov spec has no words"));
        }
        if self.max_len == 0 {
            return Err(Error::invalid("max_len must be >= 1"));
        }
        if self.start.len() != w {
            return Err(Error::invalid(format!("start row has {} entries, expected {w}", self.start.len())));
        }
        check_row(&self.start, "start row")?;
        if self.transitions.len() != w {
            return Err(Error::invalid(format!(
                "{} transition rows for {w} words",
                self.transitions.len()
            )));
        }
        for (i, row) in self.transitions.iter().enumerate() {
            if row.len() != w + 1 {
                return Err(Error::invalid(format!(
                    "transition row {i} has {} entries, expected {}",
                    row.len(),
                    w + 1
                )));
            }
            check_row(row, &format!("transition row {i}"))?;
        }
        Ok(())
    }

    /// Random sparse chain: each word gets `branching` successors with random
    /// weights and ends the sentence with probability `end_prob`.
    pub fn random(words: Vec<String>, branching: usize, end_prob: f64, seed: u64) -> Result<Self> {
        let w = words.len();
        if w == 0 || branching == 0 || branching > w || !(0.0..1.0).contains(&end_prob) || end_prob <= 0.0 {
            return Err(Error::invalid("random markov spec needs words, 1 <= branching <= words, 0 < end_prob < 1"));
        }
        let mut rng = rng::stream(seed, &[rng::label::SYNTH_TABLE]);
        let weights = |rng: &mut Rng, n: usize| -> Vec<f64> {
            let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.gen::<f64>()).collect();
            let s: f64 = raw.iter().sum();
            raw.into_iter().map(|x| x / s).collect()
        };
        let start = weights(&mut rng, w);
        let mut transitions = Vec::with_capacity(w);
        for _ in 0..w {
            let succ = rng::sample_without_replacement(&mut rng, w, branching);
            let ws = weights(&mut rng, branching);
            let mut row = vec![0.0; w + 1];
            for (&j, p) in succ.iter().zip(ws) {
                row[j] = p * (1.0 - end_prob);
            }
            row[w] = end_prob;
            transitions.push(row);
        }
        let spec = MarkovSpec {
            words,
            start,
            transitions,
            max_len: 60,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Samples one sentence as word indices.
    pub fn sample_indices(&self, rng: &mut Rng) -> Vec<usize> {
        let w = self.words.len();
        let mut out = vec![draw(rng, &self.start)];
        while out.len() < self.max_len {
            let next = draw(rng, &self.transitions[*out.last().unwrap()]);
            if next == w {
                break;
            }
            out.push(next);
        }
        out
    }
}

fn draw(rng: &mut Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // rounding slack: fall back to the last outcome with positive mass
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}

/// Samples `sentence_count` sentences from `spec`, deterministic in `seed`.
pub fn generate_synthetic_corpus(
    author_id: &str,
    spec: &MarkovSpec,
    seed: u64,
    sentence_count: usize,
) -> Result<RawCorpus> {
    spec.validate()?;
    let mut rng = rng::stream(seed, &[rng::label::SYNTH]);
    let sentences = (0..sentence_count)
        .map(|_| {
            let idx = spec.sample_indices(&mut rng);
            idx.iter().map(|&i| spec.words[i].as_str()).collect::<Vec<_>>().join(" ")
        })
        .collect();
    RawCorpus::new(author_id, sentences)
}

/// `n` distinct consonant-vowel words that the tokenizer and Porter stemmer
/// leave unchanged, so synthetic lexicons survive preprocessing intact.
pub fn synthetic_lexicon(n: usize, offset: usize) -> Vec<String> {
    const C: &[u8] = b"bdfgkmnprtvz";
    const V: &[u8] = b"aiou";
    let syllables: Vec<String> = C
        .iter()
        .flat_map(|&c| V.iter().map(move |&v| String::from_utf8(vec![c, v]).unwrap()))
        .collect();
    let s = syllables.len();
    (0..)
        .map(|i: usize| {
            let a = &syllables[i % s];
            let b = &syllables[(i / s) % s];
            let c = &syllables[(i / (s * s)) % s];
            format!("{a}{b}{c}")
        })
        .filter(|w| porter_stem(w) == *w)
        .skip(offset)
        .take(n)
        .collect()
}
