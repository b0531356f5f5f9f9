use authorship_lm::experiment::AuthorSplit;
use authorship_lm::kn::{CountTables, KnModel};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Method, RunConfig};
use crate::layout::{self, model_path, training_log_path, AuthorData};
use crate::status::{ConfigError, RunStatus};

/// Loads every preprocessed author. Config errors abort; unreadable authors
/// are recorded and skipped.
pub fn load_authors(cfg: &RunConfig, status: &mut RunStatus) -> anyhow::Result<Vec<AuthorData>> {
    let mut out = Vec::new();
    for author in layout::preprocessed_authors(cfg)? {
        match AuthorData::load(cfg, &author) {
            Ok(d) => out.push(d),
            Err(e) if e.is::<ConfigError>() => return Err(e),
            Err(e) => status.fail(&author, &e),
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct EpochRow {
    epoch: usize,
    train_loss: f64,
    validation_loss: f64,
    validation_perplexity: f64,
}

pub fn run(cfg: &RunConfig, method: Method) -> anyhow::Result<RunStatus> {
    cfg.validate().map_err(crate::status::config_err)?;
    let mut status = RunStatus::default();
    let authors = load_authors(cfg, &mut status)?;
    layout::create_dir(&cfg.stage_dir(method.name()))?;

    let jobs: Vec<(&AuthorData, u64)> = authors
        .iter()
        .flat_map(|a| cfg.seeds.iter().map(move |&s| (a, s)))
        .collect();
    let results: Vec<_> = layout::thread_pool(cfg.workers)?.install(|| {
        jobs.par_iter()
            .map(|&(a, seed)| {
                let r = a.split(cfg, seed).and_then(|split| match method {
                    Method::Nnlm => train_nnlm(cfg, &split, seed),
                    Method::Kn => train_kn(cfg, &split, seed),
                });
                (a.author.as_str(), seed, r)
            })
            .collect()
    });
    for (author, seed, r) in results {
        match r {
            Ok(msg) => eprintln!("{} {author} seed {seed}: {msg}", method.name()),
            Err(e) => status.fail(&format!("{} {author} seed {seed}", method.name()), &e),
        }
    }
    Ok(status)
}

fn train_nnlm(cfg: &RunConfig, split: &AuthorSplit, seed: u64) -> anyhow::Result<String> {
    let base = cfg.nnlm.base(cfg.pipeline.order);
    let outcome = split.train_nnlm(&base)?;
    outcome.model.save(&model_path(cfg, Method::Nnlm, &split.author, seed))?;
    let mut w = layout::csv_writer(&training_log_path(cfg, &split.author, seed))?;
    for r in &outcome.history {
        w.serialize(EpochRow {
            epoch: r.epoch,
            train_loss: r.train_loss,
            validation_loss: r.validation_loss,
            validation_perplexity: r.validation_perplexity(),
        })?;
    }
    w.flush()?;
    let best = &outcome.history[outcome.best_epoch - 1];
    Ok(format!(
        "best epoch {} of {}, validation perplexity {:.3}",
        outcome.best_epoch,
        outcome.history.len(),
        best.validation_perplexity()
    ))
}

fn train_kn(cfg: &RunConfig, split: &AuthorSplit, seed: u64) -> anyhow::Result<String> {
    let model = match &cfg.kn.discounts {
        None => split.train_kn()?,
        Some(d) => {
            let train = split.processed.select(&split.split.train);
            let tables = CountTables::count(&train, split.processed.order());
            KnModel::from_counts_with_discounts(&tables, split.processed.vocabulary.len(), d.clone())?
        }
    };
    model.save_arpa(&model_path(cfg, Method::Kn, &split.author, seed))?;
    Ok(format!("discounts {:?}", model.discounts()))
}
