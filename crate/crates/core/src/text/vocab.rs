use std::collections::HashMap;
use std::io::{BufRead, Write};
use crate::error::{Error, Result};
use crate::lines::LineReader;

pub const SENTENCE_START: u32 = 0;
pub const SENTENCE_END: u32 = 1;
pub const UNKNOWN: u32 = 2;
pub const RESERVED: [&str; 3] = ["<s>", "</s>", "<unk>"];

/// Bidirectional word <-> id map. Ids are dense in `0..len()`, the three
/// reserved tokens occupy ids 0..3 and regular words follow by descending
/// corpus count (ties broken lexicographically).
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    /// Builds the vocabulary of `sentences`, keeping words whose relative
    /// frequency `count / total` is at least `prune_threshold`.
    ///
    /// With the usual threshold of 1e-5 a 160k-token corpus keeps words
    /// seen at least twice; on small corpora the cutoff count can fall below 1,
    /// in which case nothing is pruned.
    pub fn build<S: AsRef<str>>(sentences: &[Vec<S>], prune_threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&prune_threshold) {
            return Err(Error::invalid(format!(
                "prune threshold {prune_threshold} outside [0, 1]"
            )));
        }
        let mut counts: HashMap<&str, u64> = HashMap::new();
        let mut total = 0u64;
        for tok in sentences.iter().flatten() {
            *counts.entry(tok.as_ref()).or_default() += 1;
            total += 1;
        }
        if total == 0 {
            return Err(Error::invalid("cannot build a vocabulary from zero tokens"));
        }
        let mut kept: Vec<(&str, u64)> = counts
            .into_iter()
            .filter(|(w, _)| !RESERVED.contains(w))
            .filter(|&(_, c)| c as f64 / total as f64 >= prune_threshold)
            .collect();
        kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let kept_total: u64 = kept.iter().map(|(_, c)| c).sum();

        let reserved_counts = [0, sentences.len() as u64, total - kept_total];
        let entries = RESERVED
            .iter()
            .zip(reserved_counts)
            .map(|(w, c)| (w.to_string(), c))
            .chain(kept.into_iter().map(|(w, c)| (w.to_string(), c)));
        Self::from_entries(entries)
    }

    /// Builds from `(word, count)` pairs in id order. The first three entries
    /// must be the reserved tokens.
    pub fn from_entries(entries: impl IntoIterator<Item = (String, u64)>) -> Result<Self> {
        let mut words = Vec::new();
        let mut counts = Vec::new();
        let mut index = HashMap::new();
        for (id, (word, count)) in entries.into_iter().enumerate() {
            if id < RESERVED.len() && word != RESERVED[id] {
                return Err(Error::invalid(format!(
                    "id {id} must be reserved token {}, found {word:?}",
                    RESERVED[id]
                )));
            }
            if index.insert(word.clone(), id as u32).is_some() {
                return Err(Error::invalid(format!("duplicate vocabulary word {word:?}")));
            }
            words.push(word);
            counts.push(count);
        }
        if words.len() < RESERVED.len() {
            return Err(Error::invalid("vocabulary is missing reserved tokens"));
        }
        Ok(Vocabulary {
            words,
            counts,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Number of regular (non-reserved) words.
    pub fn word_types(&self) -> usize {
        self.words.len() - RESERVED.len()
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    /// Id of `word`, or [`UNKNOWN`] when it was pruned or never seen.
    pub fn id_or_unknown(&self, word: &str) -> u32 {
        self.id(word).unwrap_or(UNKNOWN)
    }

    pub fn word(&self, id: u32) -> Option<&str> {
        self.words.get(id as usize).map(String::as_str)
    }

    pub fn count(&self, id: u32) -> Option<u64> {
        self.counts.get(id as usize).copied()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// Fraction of in-vocabulary tokens covered by the `k` most frequent
    /// regular words. Reaches 1.0 once `k` covers every regular word.
    pub fn coverage(&self, k: usize) -> f64 {
        let regular = &self.counts[RESERVED.len()..];
        let total: u64 = regular.iter().sum();
        if total == 0 {
            return 0.0;
        }
        let top: u64 = regular.iter().take(k).sum();
        top as f64 / total as f64
    }

    /// Writes `word<TAB>id<TAB>count` lines, one per id.
    pub fn write_entries<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for (id, (word, count)) in self.words.iter().zip(&self.counts).enumerate() {
            writeln!(w, "{word}\t{id}\t{count}")?;
        }
        Ok(())
    }

    /// Reads entry lines until a line starting with `\\` or EOF.
    pub(crate) fn read_entries<R: BufRead>(reader: &mut LineReader<R>) -> Result<Self> {
        let mut entries = Vec::new();
        while let Some(peeked) = reader.peek()? {
            if peeked.starts_with('\\') {
                break;
            }
            let line = reader.expect_line("vocabulary entry")?;
            let mut fields = line.split('\t');
            let (Some(word), Some(id), Some(count), None) =
                (fields.next(), fields.next(), fields.next(), fields.next())
            else {
                return Err(reader.error("expected word<TAB>id<TAB>count"));
            };
            let id: usize = id
                .parse()
                .map_err(|_| reader.error(format!("bad id {id:?}")))?;
            if id != entries.len() {
                return Err(reader.error(format!(
                    "ids must be dense and ordered, expected {} got {id}",
                    entries.len()
                )));
            }
            let count: u64 = count
                .parse()
                .map_err(|_| reader.error(format!("bad count {count:?}")))?;
            entries.push((word.to_string(), count));
        }
        Self::from_entries(entries).map_err(|e| reader.error(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn single_surviving_type() {
        let corpus = vec![toks("a a a a a a a a a a")];
        let v = Vocabulary::build(&corpus, 0.5).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v.id("a"), Some(3));
        assert_eq!(v.word(SENTENCE_START), Some("<s>"));
    }

    #[test]
    fn threshold_zero_keeps_everything() {
        let corpus = vec![toks("b a c a"), toks("d")];
        let v = Vocabulary::build(&corpus, 0.0).unwrap();
        assert_eq!(v.len(), 4 + 3);
        // descending count then lexicographic
        assert_eq!(&v.words()[3..], ["a", "b", "c", "d"]);
        assert_eq!(v.count(UNKNOWN), Some(0));
        assert_eq!(v.count(SENTENCE_END), Some(2));
    }

    #[test]
    fn pruned_tokens_counted_as_unknown() {
        let corpus = vec![toks("a a a b")];
        let v = Vocabulary::build(&corpus, 0.5).unwrap();
        assert_eq!(v.id("b"), None);
        assert_eq!(v.id_or_unknown("b"), UNKNOWN);
        assert_eq!(v.count(UNKNOWN), Some(1));
    }

    #[test]
    fn rejects_bad_threshold_and_empty_corpus() {
        let corpus = vec![toks("a")];
        assert!(Vocabulary::build(&corpus, -0.1).is_err());
        assert!(Vocabulary::build(&corpus, 1.5).is_err());
        assert!(Vocabulary::build::<String>(&[vec![]], 0.0).is_err());
    }

    #[test]
    fn coverage_reaches_one() {
        let corpus = vec![toks("a a a b b c")];
        let v = Vocabulary::build(&corpus, 0.0).unwrap();
        assert_eq!(v.coverage(1), 0.5);
        assert_eq!(v.coverage(v.word_types()), 1.0);
        assert_eq!(v.coverage(v.len()), 1.0);
    }
}
