use authorship_lm::eval::{perplexity, MeanStd};
use rayon::prelude::*;
use serde::Serialize;

use super::{load_model, train::load_authors};
use crate::config::RunConfig;
use crate::layout::{self, EVAL};
use crate::status::{config_err, RunStatus};

/// Row label for the per-seed average over authors.
pub const ALL_AUTHORS: &str = "ALL";

#[derive(Serialize)]
struct PerplexityRow<'a> {
    method: &'a str,
    author: &'a str,
    seed: u64,
    tokens: usize,
    log_prob: f64,
    perplexity: f64,
}

#[derive(Debug, Serialize, serde::Deserialize)]
pub struct SummaryRow {
    pub method: String,
    pub author: String,
    pub seeds: usize,
    pub mean_pp: f64,
    /// Empty with a single seed.
    pub std_pp: Option<f64>,
    /// `mean±std` to one decimal, or just the mean.
    pub formatted: String,
}

pub fn summarize(method: &str, author: &str, values: &[f64]) -> SummaryRow {
    let (mean_pp, std_pp, formatted) = match MeanStd::of(values) {
        Ok(m) => (m.mean, Some(m.std), m.to_string()),
        Err(_) => (values[0], None, format!("{:.1}", values[0])),
    };
    SummaryRow {
        method: method.into(),
        author: author.into(),
        seeds: values.len(),
        mean_pp,
        std_pp,
        formatted,
    }
}

pub fn run(cfg: &RunConfig) -> anyhow::Result<RunStatus> {
    cfg.validate().map_err(config_err)?;
    let mut status = RunStatus::default();
    let authors = load_authors(cfg, &mut status)?;
    let out_dir = cfg.stage_dir(EVAL);
    layout::create_dir(&out_dir)?;

    let methods = &cfg.experiment.methods;
    let jobs: Vec<_> = methods
        .iter()
        .flat_map(|&m| authors.iter().flat_map(move |a| cfg.seeds.iter().map(move |&s| (m, a, s))))
        .collect();
    let results: Vec<_> = layout::thread_pool(cfg.workers)?.install(|| {
        jobs.par_iter()
            .map(|&(m, a, seed)| -> anyhow::Result<_> {
                let model = load_model(cfg, m, &a.author, seed)?;
                let split = a.split(cfg, seed)?;
                Ok(perplexity(model.as_ref(), &split.test_sentences())?)
            })
            .collect()
    });

    let mut rows = layout::csv_writer(&out_dir.join("perplexity.csv"))?;
    // (method, author) -> per-seed perplexities; complete only if every seed succeeded
    let mut table = vec![vec![Vec::new(); authors.len()]; methods.len()];
    for ((m, a, seed), r) in jobs.iter().zip(results) {
        let what = format!("eval {} {} seed {seed}", m.name(), a.author);
        match r {
            Ok(rep) => {
                rows.serialize(PerplexityRow {
                    method: m.name(),
                    author: &a.author,
                    seed: *seed,
                    tokens: rep.tokens,
                    log_prob: rep.total_log_prob,
                    perplexity: rep.perplexity(),
                })?;
                let mi = methods.iter().position(|x| x == m).unwrap();
                let ai = authors.iter().position(|x| x.author == a.author).unwrap();
                table[mi][ai].push(rep.perplexity());
            }
            Err(e) => status.fail(&what, &e),
        }
    }
    rows.flush()?;

    let mut summary = layout::csv_writer(&out_dir.join("summary.csv"))?;
    let n_seeds = cfg.seeds.len();
    for (mi, m) in methods.iter().enumerate() {
        for (ai, a) in authors.iter().enumerate() {
            if !table[mi][ai].is_empty() {
                summary.serialize(summarize(m.name(), &a.author, &table[mi][ai]))?;
            }
        }
        let complete = !authors.is_empty() && table[mi].iter().all(|v| v.len() == n_seeds);
        if complete {
            let per_seed: Vec<f64> = (0..n_seeds)
                .map(|s| table[mi].iter().map(|v| v[s]).sum::<f64>() / authors.len() as f64)
                .collect();
            let row = summarize(m.name(), ALL_AUTHORS, &per_seed);
            println!("{} mean test perplexity: {}", m.name(), row.formatted);
            summary.serialize(row)?;
        }
    }
    summary.flush()?;
    Ok(status)
}
