use std::collections::BTreeMap;

use crate::text::SENTENCE_START;

pub type NgramMap = BTreeMap<Vec<u32>, u64>;

/// Raw n-gram counts for orders `1..=order` plus Kneser-Ney continuation counts.
///
/// An order-k entry counts the k-grams ending at each predictable position
/// (every position of a padded sentence that is not a start pad). The
/// continuation count of a k-gram `x` (k < order) is the number of distinct
/// words `u` for which `u x` occurs as a (k+1)-gram.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CountTables {
    order: usize,
    raw: Vec<NgramMap>,
    continuation: Vec<NgramMap>,
}

/// Counts/context statistics of one table, keyed by context.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct ContextStats {
    /// Sum of the table's values over every continuation word.
    pub total: u64,
    /// Number of distinct continuation words.
    pub types: u64,
}

impl CountTables {
    pub fn empty(order: usize) -> Self {
        assert!(order >= 1, "order must be >= 1");
        CountTables {
            order,
            raw: vec![NgramMap::new(); order],
            continuation: vec![NgramMap::new(); order - 1],
        }
    }

    /// Counts sliding windows over padded sentences.
    pub fn count<'a>(sentences: impl IntoIterator<Item = &'a Vec<u32>>, order: usize) -> Self {
        let mut t = Self::empty(order);
        for s in sentences {
            for i in 0..s.len() {
                if s[i] == SENTENCE_START {
                    continue;
                }
                for k in 1..=order.min(i + 1) {
                    *t.raw[k - 1].entry(s[i + 1 - k..=i].to_vec()).or_default() += 1;
                }
            }
        }
        for k in 1..order {
            let mut cont = NgramMap::new();
            for longer in t.raw[k].keys() {
                *cont.entry(longer[1..].to_vec()).or_default() += 1;
            }
            t.continuation[k - 1] = cont;
        }
        t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Raw count of an n-gram (length 1..=order).
    pub fn raw_count(&self, ngram: &[u32]) -> u64 {
        self.raw
            .get(ngram.len().wrapping_sub(1))
            .and_then(|m| m.get(ngram))
            .copied()
            .unwrap_or(0)
    }

    /// Number of distinct left extensions of `ngram` (length 1..order).
    pub fn continuation_count(&self, ngram: &[u32]) -> u64 {
        self.continuation
            .get(ngram.len().wrapping_sub(1))
            .and_then(|m| m.get(ngram))
            .copied()
            .unwrap_or(0)
    }

    pub fn raw_table(&self, k: usize) -> &NgramMap {
        &self.raw[k - 1]
    }

    pub fn continuation_table(&self, k: usize) -> &NgramMap {
        &self.continuation[k - 1]
    }

    /// The table whose values get discounted at order `k`: raw counts at the
    /// highest order, continuation counts below it.
    pub fn smoothing_table(&self, k: usize) -> &NgramMap {
        if k == self.order {
            self.raw_table(k)
        } else {
            self.continuation_table(k)
        }
    }

    /// Per-context totals of [`Self::smoothing_table`] at order `k`.
    pub(crate) fn context_stats(&self, k: usize) -> BTreeMap<Vec<u32>, ContextStats> {
        let mut stats: BTreeMap<Vec<u32>, ContextStats> = BTreeMap::new();
        for (gram, &c) in self.smoothing_table(k) {
            let e = stats.entry(gram[..k - 1].to_vec()).or_default();
            e.total += c;
            e.types += 1;
        }
        stats
    }

    /// Number of entries with value exactly 1 and exactly 2 in the order-`k`
    /// smoothing table.
    pub fn count_of_counts(&self, k: usize) -> (u64, u64) {
        let table = self.smoothing_table(k);
        let n1 = table.values().filter(|&&c| c == 1).count() as u64;
        let n2 = table.values().filter(|&&c| c == 2).count() as u64;
        (n1, n2)
    }
}

pub const DISCOUNT_MIN: f64 = 0.05;
pub const DISCOUNT_MAX: f64 = 0.95;
pub const DISCOUNT_FALLBACK: f64 = 0.5;

/// Absolute discount `n1 / (n1 + 2 n2)` per order (index 0 is order 1),
/// clamped to `[0.05, 0.95]`; 0.5 when there is nothing to estimate from.
pub fn estimate_discounts(tables: &CountTables) -> Vec<f64> {
    (1..=tables.order())
        .map(|k| {
            let (n1, n2) = tables.count_of_counts(k);
            discount_from_counts(n1, n2)
        })
        .collect()
}

pub fn discount_from_counts(n1: u64, n2: u64) -> f64 {
    let denom = n1 + 2 * n2;
    if denom == 0 {
        DISCOUNT_FALLBACK
    } else {
        (n1 as f64 / denom as f64).clamp(DISCOUNT_MIN, DISCOUNT_MAX)
    }
}
