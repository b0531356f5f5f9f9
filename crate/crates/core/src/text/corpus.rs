use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::lines::LineReader;

use super::porter::porter_stem;
use super::tokenize::tokenize;
use super::vocab::{Vocabulary, SENTENCE_END, SENTENCE_START};

const CORPUS_MAGIC: &str = "#authorship-lm corpus v1";
const VOCAB_MAGIC: &str = "#authorship-lm vocabulary v1";

/// One author's raw text, one sentence per entry.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCorpus {
    pub author_id: String,
    sentences: Vec<String>,
}

impl RawCorpus {
    pub fn new(author_id: impl Into<String>, sentences: Vec<String>) -> Result<Self> {
        let author_id = author_id.into();
        if sentences.is_empty() {
            return Err(Error::invalid(format!("author {author_id}: no sentences")));
        }
        if let Some(i) = sentences.iter().position(|s| s.trim().is_empty()) {
            return Err(Error::invalid(format!("author {author_id}: sentence {i} is empty")));
        }
        Ok(RawCorpus {
            author_id,
            sentences,
        })
    }

    /// Reads a UTF-8 file with one sentence per line; blank lines are skipped
    /// and the file stem becomes the author id.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let author = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::invalid(format!("{}: no usable file stem", path.display())))?;
        let sentences = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect();
        Self::new(author, sentences)
    }

    pub fn sentences(&self) -> &[String] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Parameters of the text pipeline, recorded alongside every processed corpus.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct PipelineParams {
    pub stem: bool,
    pub prune_threshold: f64,
    pub order: usize,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            stem: true,
            prune_threshold: 1e-5,
            order: 4,
        }
    }
}

impl PipelineParams {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::invalid(format!("model order must be >= 2, got {}", self.order)));
        }
        if !(0.0..=1.0).contains(&self.prune_threshold) {
            return Err(Error::invalid(format!(
                "prune threshold {} outside [0, 1]",
                self.prune_threshold
            )));
        }
        Ok(())
    }

    /// Tokenizes (and optionally stems) one line.
    pub fn words(&self, line: &str) -> Vec<String> {
        let toks = tokenize(line);
        if self.stem {
            toks.iter().map(|t| porter_stem(t)).collect()
        } else {
            toks
        }
    }

    /// Tokenizes every sentence, dropping those left with no tokens.
    pub fn sentence_words(&self, raw: &RawCorpus) -> Vec<Vec<String>> {
        raw.sentences()
            .iter()
            .map(|s| self.words(s))
            .filter(|w| !w.is_empty())
            .collect()
    }

    /// Runs the full pipeline for one author: tokenize, stem, build the pruned
    /// vocabulary and encode. Returns the word sentences alongside so test text
    /// can be re-encoded under other authors' vocabularies.
    pub fn prepare(&self, raw: &RawCorpus) -> Result<(Vec<Vec<String>>, ProcessedCorpus)> {
        self.validate()?;
        let words = self.sentence_words(raw);
        let vocab = Vocabulary::build(&words, self.prune_threshold)
            .map_err(|e| Error::invalid(format!("author {}: {e}", raw.author_id)))?;
        let processed = encode(&words, vocab, *self);
        Ok((words, processed))
    }
}

/// Encodes one sentence: `order - 1` start pads, word ids (OOV -> UNKNOWN), one end token.
pub fn encode_sentence<S: AsRef<str>>(words: &[S], vocab: &Vocabulary, order: usize) -> Vec<u32> {
    let mut ids = Vec::with_capacity(words.len() + order);
    ids.resize(order - 1, SENTENCE_START);
    ids.extend(words.iter().map(|w| vocab.id_or_unknown(w.as_ref())));
    ids.push(SENTENCE_END);
    ids
}

/// Index-encoded, padded sentences of one author plus the vocabulary and
/// pipeline parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessedCorpus {
    pub vocabulary: Vocabulary,
    pub sentences: Vec<Vec<u32>>,
    pub params: PipelineParams,
}

pub fn encode<S: AsRef<str>>(
    sentences: &[Vec<S>],
    vocabulary: Vocabulary,
    params: PipelineParams,
) -> ProcessedCorpus {
    let sentences = sentences
        .iter()
        .map(|s| encode_sentence(s, &vocabulary, params.order))
        .collect();
    ProcessedCorpus {
        vocabulary,
        sentences,
        params,
    }
}

/// A context window of `order - 1` ids and the id that follows it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContextSample {
    pub context: Vec<u32>,
    pub target: u32,
}

/// Sliding windows over padded sentences, one per non-start position.
pub fn samples_from_sentences<'a>(
    sentences: impl IntoIterator<Item = &'a Vec<u32>>,
    order: usize,
) -> Vec<ContextSample> {
    let mut out = Vec::new();
    for s in sentences {
        for window in s.windows(order) {
            let (context, target) = window.split_at(order - 1);
            if target[0] == SENTENCE_START {
                continue;
            }
            out.push(ContextSample {
                context: context.to_vec(),
                target: target[0],
            });
        }
    }
    out
}

impl ProcessedCorpus {
    pub fn order(&self) -> usize {
        self.params.order
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Word strings of a sentence with padding removed.
    pub fn decode(&self, sentence: &[u32]) -> Vec<String> {
        sentence
            .iter()
            .filter(|&&id| id != SENTENCE_START && id != SENTENCE_END)
            .map(|&id| self.vocabulary.word(id).unwrap_or("<unk>").to_string())
            .collect()
    }

    /// Context samples drawn from the sentences at `indices`.
    pub fn extract_samples(&self, indices: &[usize]) -> Vec<ContextSample> {
        samples_from_sentences(indices.iter().map(|&i| &self.sentences[i]), self.order())
    }

    pub fn select(&self, indices: &[usize]) -> Vec<Vec<u32>> {
        indices.iter().map(|&i| self.sentences[i].clone()).collect()
    }

    /// Writes the corpus text format:
    ///
    /// ```text
    /// #authorship-lm corpus v1
    /// stem<TAB>true
    /// prune_threshold<TAB>0.00001
    /// order<TAB>4
    /// \vocab
    /// <s><TAB>0<TAB>0          (word<TAB>id<TAB>count, one line per id)
    /// ...
    /// \sentences
    /// 0 0 0 17 5 1             (space-separated ids, padding included)
    /// ...
    /// \end
    /// ```
    pub fn write_to<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "{CORPUS_MAGIC}")?;
        write_params(w, &self.params)?;
        writeln!(w, "\\vocab")?;
        self.vocabulary.write_entries(w)?;
        writeln!(w, "\\sentences")?;
        for s in &self.sentences {
            let line: Vec<String> = s.iter().map(u32::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        writeln!(w, "\\end")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(f);
        self.write_to(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }

    pub fn read_from<R: BufRead>(reader: R, path: &Path) -> Result<Self> {
        let mut r = LineReader::new(reader, path);
        expect_exact(&mut r, CORPUS_MAGIC)?;
        let params = read_params(&mut r)?;
        expect_exact(&mut r, "\\vocab")?;
        let vocabulary = Vocabulary::read_entries(&mut r)?;
        expect_exact(&mut r, "\\sentences")?;
        let v = vocabulary.len();
        let mut sentences = Vec::new();
        loop {
            let line = r.expect_line("sentence or \\end")?;
            if line == "\\end" {
                break;
            }
            let ids = line
                .split(' ')
                .map(|t| match t.parse::<u32>() {
                    Ok(id) if (id as usize) < v => Ok(id),
                    _ => Err(r.error(format!("bad or out-of-range id {t:?}"))),
                })
                .collect::<Result<Vec<u32>>>()?;
            let padded = ids.len() > params.order
                && ids[..params.order - 1].iter().all(|&i| i == SENTENCE_START)
                && ids[params.order - 1] != SENTENCE_START
                && ids.last() == Some(&SENTENCE_END);
            if !padded {
                return Err(r.error(format!("sentence not padded for order {}", params.order)));
            }
            sentences.push(ids);
        }
        Ok(ProcessedCorpus {
            vocabulary,
            sentences,
            params,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(BufReader::new(f), path)
    }
}

/// Vocabulary-only file: magic line, pipeline parameters, `\vocab`, entries, `\end`.
pub fn write_vocabulary<W: Write>(
    w: &mut W,
    vocab: &Vocabulary,
    params: &PipelineParams,
) -> std::io::Result<()> {
    writeln!(w, "{VOCAB_MAGIC}")?;
    write_params(w, params)?;
    writeln!(w, "\\vocab")?;
    vocab.write_entries(w)?;
    writeln!(w, "\\end")
}

pub fn read_vocabulary<R: BufRead>(reader: R, path: &Path) -> Result<(Vocabulary, PipelineParams)> {
    let mut r = LineReader::new(reader, path);
    expect_exact(&mut r, VOCAB_MAGIC)?;
    let params = read_params(&mut r)?;
    expect_exact(&mut r, "\\vocab")?;
    let vocab = Vocabulary::read_entries(&mut r)?;
    expect_exact(&mut r, "\\end")?;
    Ok((vocab, params))
}

fn write_params<W: Write>(w: &mut W, p: &PipelineParams) -> std::io::Result<()> {
    writeln!(w, "stem\t{}", p.stem)?;
    writeln!(w, "prune_threshold\t{}", p.prune_threshold)?;
    writeln!(w, "order\t{}", p.order)
}

fn read_params<R: BufRead>(r: &mut LineReader<R>) -> Result<PipelineParams> {
    let params = PipelineParams {
        stem: r.parse_field("stem")?,
        prune_threshold: r.parse_field("prune_threshold")?,
        order: r.parse_field("order")?,
    };
    params.validate().map_err(|e| r.error(e.to_string()))?;
    Ok(params)
}

fn expect_exact<R: BufRead>(r: &mut LineReader<R>, expected: &str) -> Result<()> {
    let line = r.expect_line(expected)?;
    if line != expected {
        return Err(r.error(format!("expected {expected:?}, found {line:?}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::vocab::UNKNOWN;

    fn params(order: usize) -> PipelineParams {
        PipelineParams {
            stem: false,
            prune_threshold: 0.0,
            order,
        }
    }

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn raw_corpus_rejects_empty() {
        assert!(RawCorpus::new("a", vec![]).is_err());
        assert!(RawCorpus::new("a", vec!["x".into(), "  ".into()]).is_err());
    }

    #[test]
    fn padding_and_oov() {
        let vocab = Vocabulary::build(&[words("dft")], 0.0).unwrap();
        let dft = vocab.id("dft").unwrap();
        assert_eq!(encode_sentence(&["dft"], &vocab, 4), [0, 0, 0, dft, SENTENCE_END]);
        assert_eq!(encode_sentence(&["fft"], &vocab, 2), [0, UNKNOWN, SENTENCE_END]);
        let empty = encode::<String>(&[], vocab, params(4));
        assert!(empty.is_empty());
    }

    #[test]
    fn window_enumeration() {
        let vocab = Vocabulary::build(&[words("w1")], 0.0).unwrap();
        let w1 = vocab.id("w1").unwrap();
        let pc = encode(&[words("w1")], vocab, params(4));
        let samples = pc.extract_samples(&[0]);
        assert_eq!(
            samples,
            [
                ContextSample { context: vec![0, 0, 0], target: w1 },
                ContextSample { context: vec![0, 0, w1], target: SENTENCE_END },
            ]
        );
        assert!(pc.extract_samples(&[]).is_empty());
    }

    #[test]
    fn sample_count_is_tokens_plus_one() {
        let s: Vec<String> = (0..20).map(|i| format!("w{i}")).collect();
        let vocab = Vocabulary::build(&[s.clone()], 0.0).unwrap();
        let pc = encode(&[s], vocab, params(4));
        let samples = pc.extract_samples(&[0]);
        assert_eq!(samples.len(), 21);
        assert!(samples.iter().all(|c| c.target != SENTENCE_START && c.context.len() == 3));
    }

    #[test]
    fn stemming_pipeline() {
        let raw = RawCorpus::new("x", vec!["The ponies, running.".into(), "...".into()]).unwrap();
        let p = PipelineParams { stem: true, prune_threshold: 0.0, order: 3 };
        let (w, pc) = p.prepare(&raw).unwrap();
        assert_eq!(w, [words("the poni run")]);
        assert_eq!(pc.decode(&pc.sentences[0]), words("the poni run"));
    }

    #[test]
    fn file_round_trip() {
        let sents = vec![words("a b c"), words("b")];
        let vocab = Vocabulary::build(&sents, 0.3).unwrap();
        let pc = encode(&sents, vocab, params(3));
        let mut buf = Vec::new();
        pc.write_to(&mut buf).unwrap();
        let back = ProcessedCorpus::read_from(&buf[..], Path::new("mem")).unwrap();
        assert_eq!(back, pc);

        let mut vbuf = Vec::new();
        write_vocabulary(&mut vbuf, &pc.vocabulary, &pc.params).unwrap();
        let (v, p) = read_vocabulary(&vbuf[..], Path::new("mem")).unwrap();
        assert_eq!(v, pc.vocabulary);
        assert_eq!(p, pc.params);
    }

    #[test]
    fn corrupt_sentence_names_line() {
        let sents = vec![words("a")];
        let vocab = Vocabulary::build(&sents, 0.0).unwrap();
        let pc = encode(&sents, vocab, params(2));
        let mut buf = Vec::new();
        pc.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("0 3 1", "0 99 1");
        match ProcessedCorpus::read_from(text.as_bytes(), Path::new("c")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 11),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
