use std::collections::BTreeSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use authorship_lm::text::{tokenize, write_vocabulary, RawCorpus};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{require_dir, RunConfig};
use crate::layout::{self, corpus_path, stems_path, vocab_path, PREPROCESS};
use crate::status::{config_err, RunStatus};

pub const COVERAGE_KS: [usize; 3] = [500, 1000, 2000];

#[derive(Debug, Serialize)]
struct VocabStats {
    author: String,
    sentences: usize,
    tokens: usize,
    raw_vocab: usize,
    stemmed_vocab: usize,
    pruned_vocab: usize,
    coverage_500: f64,
    coverage_1000: f64,
    coverage_2000: f64,
}

pub fn run(cfg: &RunConfig) -> anyhow::Result<RunStatus> {
    cfg.validate().map_err(config_err)?;
    require_dir(&cfg.corpus_dir, "corpus directory").map_err(config_err)?;
    let files = layout::files_with_extension(&cfg.corpus_dir, "txt").map_err(config_err)?;
    if files.is_empty() {
        return Err(config_err(anyhow::anyhow!(
            "no author files (*.txt) in {}",
            cfg.corpus_dir.display()
        )));
    }

    let out_dir = cfg.stage_dir(PREPROCESS);
    layout::create_dir(&out_dir)?;
    let results: Vec<_> = layout::thread_pool(cfg.workers)?
        .install(|| files.par_iter().map(|f| (f, process_author(cfg, f))).collect());

    let mut status = RunStatus::default();
    let mut w = layout::csv_writer(&out_dir.join("vocab_stats.csv"))?;
    for (file, result) in results {
        match result {
            Ok(stats) => {
                eprintln!(
                    "preprocessed {}: {} sentences, vocabulary {}",
                    stats.author, stats.sentences, stats.pruned_vocab
                );
                w.serialize(stats)?;
            }
            Err(e) => status.fail(&file.display().to_string(), &e),
        }
    }
    w.flush()?;
    Ok(status)
}

fn process_author(cfg: &RunConfig, file: &Path) -> anyhow::Result<VocabStats> {
    let raw = RawCorpus::from_file(file)?;
    let params = cfg.pipeline;
    let (words, processed) = params.prepare(&raw)?;
    let author = raw.author_id.as_str();

    processed.save(&corpus_path(cfg, author))?;
    layout::write_stems(&stems_path(cfg, author), &words)?;
    let vpath = vocab_path(cfg, author);
    let mut vw = BufWriter::new(fs::File::create(&vpath).with_context(|| format!("creating {}", vpath.display()))?);
    write_vocabulary(&mut vw, &processed.vocabulary, &params)?;
    vw.flush()?;

    let raw_vocab: BTreeSet<String> = raw.sentences().iter().flat_map(|s| tokenize(s)).collect();
    let stemmed_vocab: BTreeSet<&String> = words.iter().flatten().collect();
    let v = &processed.vocabulary;
    Ok(VocabStats {
        author: author.to_string(),
        sentences: processed.len(),
        tokens: words.iter().map(Vec::len).sum(),
        raw_vocab: raw_vocab.len(),
        stemmed_vocab: stemmed_vocab.len(),
        pruned_vocab: v.word_types(),
        coverage_500: v.coverage(COVERAGE_KS[0]),
        coverage_1000: v.coverage(COVERAGE_KS[1]),
        coverage_2000: v.coverage(COVERAGE_KS[2]),
    })
}
