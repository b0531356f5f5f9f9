use std::collections::HashMap;
use std::f64::consts::LN_10;

use crate::error::{Error, Result};

use super::counts::{estimate_discounts, CountTables};

/// One stored n-gram: interpolated probability of its last word given the
/// preceding ones, and the backoff weight it carries when used as a context.
/// Both are log10; `log10_prob` is `-inf` for context-only entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NgramEntry {
    pub log10_prob: f64,
    pub log10_bow: f64,
}

/// Interpolated Kneser-Ney model with one absolute discount per order,
/// stored in backoff form.
///
/// For a context `h` of length `m` and the table `T` discounted at order
/// `m + 1` (raw counts at the highest order, continuation counts below):
///
/// ```text
/// P(w | h) = max(T(h w) - D, 0) / T(h .) + D * |{w : T(h w) > 0}| / T(h .) * P(w | h[1..])
/// ```
///
/// with `P(w | empty-context-below-unigram) = 1 / V`, and `P(w | h) = P(w | h[1..])`
/// when `T(h .) = 0`. Stored probabilities are the full interpolated values and
/// the backoff weight of `h` is `D * types / total`, so a query reduces to the
/// standard backoff walk and a saved model answers bit-identically.
#[derive(Debug, Clone, PartialEq)]
pub struct KnModel {
    order: usize,
    vocab_size: usize,
    discounts: Vec<f64>,
    /// `grams[k - 1]`: entries of length `k`.
    grams: Vec<HashMap<Vec<u32>, NgramEntry>>,
}

impl KnModel {
    /// Estimates a model from count tables over a vocabulary of `vocab_size` ids.
    pub fn from_counts(tables: &CountTables, vocab_size: usize) -> Result<Self> {
        let discounts = estimate_discounts(tables);
        Self::from_counts_with_discounts(tables, vocab_size, discounts)
    }

    pub fn from_counts_with_discounts(
        tables: &CountTables,
        vocab_size: usize,
        discounts: Vec<f64>,
    ) -> Result<Self> {
        let order = tables.order();
        if vocab_size == 0 {
            return Err(Error::invalid("vocab_size must be >= 1"));
        }
        if discounts.len() != order || discounts.iter().any(|d| !(0.0..1.0).contains(d)) {
            return Err(Error::invalid(format!("need {order} discounts in [0, 1), got {discounts:?}")));
        }
        for k in 1..=order {
            if let Some(&id) = tables.raw_table(k).keys().flatten().find(|&&id| id as usize >= vocab_size) {
                return Err(Error::IdOutOfRange { id, vocab_size });
            }
        }
        let stats: Vec<_> = (1..=order).map(|k| tables.context_stats(k)).collect();
        let uniform = 1.0 / vocab_size as f64;

        // linear-space interpolated probability, used only while building
        let prob = |gram: &[u32]| -> f64 {
            let w = gram[gram.len() - 1];
            let mut p = uniform;
            for k in 1..=gram.len() {
                let h = &gram[gram.len() - k..gram.len() - 1];
                let Some(st) = stats[k - 1].get(h) else { continue };
                let d = discounts[k - 1];
                let mut key = h.to_vec();
                key.push(w);
                let c = tables.smoothing_table(k).get(&key).copied().unwrap_or(0) as f64;
                let total = st.total as f64;
                p = (c - d).max(0.0) / total + d * st.types as f64 / total * p;
            }
            p
        };

        let mut grams: Vec<HashMap<Vec<u32>, NgramEntry>> = vec![HashMap::new(); order];
        for w in 0..vocab_size as u32 {
            grams[0].insert(
                vec![w],
                NgramEntry {
                    log10_prob: prob(&[w]).log10(),
                    log10_bow: 0.0,
                },
            );
        }
        for k in 2..=order {
            for gram in tables.smoothing_table(k).keys() {
                grams[k - 1].insert(
                    gram.clone(),
                    NgramEntry {
                        log10_prob: prob(gram).log10(),
                        log10_bow: 0.0,
                    },
                );
            }
        }
        for k in 2..=order {
            let d = discounts[k - 1];
            for (h, st) in &stats[k - 1] {
                let bow = (d * st.types as f64 / st.total as f64).log10();
                grams[k - 2]
                    .entry(h.clone())
                    .or_insert(NgramEntry {
                        log10_prob: f64::NEG_INFINITY,
                        log10_bow: 0.0,
                    })
                    .log10_bow = bow;
            }
        }
        Ok(KnModel {
            order,
            vocab_size,
            discounts,
            grams,
        })
    }

    /// Counts `sentences` (padded id sequences) and estimates the model.
    pub fn train(sentences: &[Vec<u32>], order: usize, vocab_size: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::invalid("order must be >= 1"));
        }
        Self::from_counts(&CountTables::count(sentences, order), vocab_size)
    }

    pub(crate) fn from_parts(
        order: usize,
        vocab_size: usize,
        discounts: Vec<f64>,
        grams: Vec<HashMap<Vec<u32>, NgramEntry>>,
    ) -> Self {
        KnModel {
            order,
            vocab_size,
            discounts,
            grams,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    /// Discount per order, index 0 being unigrams.
    pub fn discounts(&self) -> &[f64] {
        &self.discounts
    }

    pub fn entries(&self, k: usize) -> &HashMap<Vec<u32>, NgramEntry> {
        &self.grams[k - 1]
    }

    /// Natural log of P(target | context). Only the last `order - 1` context
    /// ids are used; shorter contexts query the lower-order distribution.
    pub fn log_prob(&self, context: &[u32], target: u32) -> Result<f64> {
        let v = self.vocab_size;
        if let Some(&id) = context.iter().chain([&target]).find(|&&id| id as usize >= v) {
            return Err(Error::IdOutOfRange { id, vocab_size: v });
        }
        let mut h = &context[context.len().saturating_sub(self.order - 1)..];
        let mut key = Vec::with_capacity(self.order);
        let mut bow = 0.0;
        loop {
            key.clear();
            key.extend_from_slice(h);
            key.push(target);
            if let Some(e) = self.grams[h.len()].get(&key) {
                if e.log10_prob.is_finite() {
                    return Ok((bow + e.log10_prob) * LN_10);
                }
            }
            if h.is_empty() {
                // every unigram is stored by construction and by the loader
                unreachable!("unigram {target} missing from a validated model");
            }
            if let Some(e) = self.grams[h.len() - 1].get(h) {
                bow += e.log10_bow;
            }
            h = &h[1..];
        }
    }
}
