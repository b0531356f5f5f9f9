//! Output layout: `<output_dir>/<stage>/<author>_<seed>.<ext>` for per-model
//! files, `<output_dir>/<stage>/<name>.csv` for tables.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use authorship_lm::experiment::AuthorSplit;
use authorship_lm::text::ProcessedCorpus;

use crate::config::{Method, RunConfig};
use crate::status::config_err;

pub const PREPROCESS: &str = "preprocess";
pub const EVAL: &str = "eval";
pub const EXPERIMENT: &str = "experiment";
pub const SYNTH: &str = "synth";

pub fn model_path(cfg: &RunConfig, method: Method, author: &str, seed: u64) -> PathBuf {
    cfg.stage_dir(method.name())
        .join(format!("{author}_{seed}.{}", method.extension()))
}

pub fn training_log_path(cfg: &RunConfig, author: &str, seed: u64) -> PathBuf {
    cfg.stage_dir(Method::Nnlm.name()).join(format!("{author}_{seed}.log.csv"))
}

pub fn corpus_path(cfg: &RunConfig, author: &str) -> PathBuf {
    cfg.stage_dir(PREPROCESS).join(format!("{author}.corpus"))
}

pub fn stems_path(cfg: &RunConfig, author: &str) -> PathBuf {
    cfg.stage_dir(PREPROCESS).join(format!("{author}.stems"))
}

pub fn vocab_path(cfg: &RunConfig, author: &str) -> PathBuf {
    cfg.stage_dir(PREPROCESS).join(format!("{author}.vocab"))
}

/// Sorted files in `dir` with extension `ext`.
pub fn files_with_extension(dir: &Path, ext: &str) -> anyhow::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == ext) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Authors with a processed corpus, in sorted order. Config error when
/// preprocessing has not produced anything yet.
pub fn preprocessed_authors(cfg: &RunConfig) -> anyhow::Result<Vec<String>> {
    let dir = cfg.stage_dir(PREPROCESS);
    if !dir.is_dir() {
        return Err(config_err(anyhow::anyhow!(
            "{} does not exist; run `preprocess` first",
            dir.display()
        )));
    }
    let authors: Vec<String> = files_with_extension(&dir, "corpus")
        .map_err(config_err)?
        .iter()
        .filter_map(|p| p.file_stem().and_then(|s| s.to_str()).map(String::from))
        .collect();
    if authors.is_empty() {
        return Err(config_err(anyhow::anyhow!("no processed corpora in {}", dir.display())));
    }
    Ok(authors)
}

pub fn write_stems(path: &Path, words: &[Vec<String>]) -> anyhow::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?);
    for s in words {
        writeln!(w, "{}", s.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

fn read_stems(path: &Path) -> anyhow::Result<Vec<Vec<String>>> {
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    BufReader::new(f)
        .lines()
        .map(|l| Ok(l?.split_whitespace().map(String::from).collect()))
        .collect()
}

/// A preprocessed author: stemmed sentences plus the encoded corpus.
pub struct AuthorData {
    pub author: String,
    pub words: Vec<Vec<String>>,
    pub processed: ProcessedCorpus,
}

impl AuthorData {
    pub fn load(cfg: &RunConfig, author: &str) -> anyhow::Result<Self> {
        let processed = ProcessedCorpus::load(&corpus_path(cfg, author))?;
        let words = read_stems(&stems_path(cfg, author))?;
        if words.len() != processed.len() {
            bail!(
                "{author}: {} stemmed sentences but {} encoded ones",
                words.len(),
                processed.len()
            );
        }
        if processed.params != cfg.pipeline {
            return Err(config_err(anyhow::anyhow!(
                "{author}: corpus was preprocessed with {:?}, config asks for {:?}; rerun `preprocess`",
                processed.params,
                cfg.pipeline
            )));
        }
        Ok(AuthorData {
            author: author.to_string(),
            words,
            processed,
        })
    }

    pub fn split(&self, cfg: &RunConfig, seed: u64) -> anyhow::Result<AuthorSplit> {
        Ok(AuthorSplit::from_processed(
            self.author.clone(),
            self.words.clone(),
            self.processed.clone(),
            seed,
            cfg.split_ratios,
        )?)
    }
}

pub fn create_dir(path: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))
}

pub fn csv_writer(path: &Path) -> anyhow::Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

pub fn thread_pool(workers: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?)
}
