use std::collections::BTreeMap;
use std::fs;

use anyhow::Context;
use authorship_lm::eval::{accuracy_sweep, AuthorModel, ExperimentReport, MeanStd, MethodModels, SweepConfig};
use serde::Serialize;

use super::{load_model, train::load_authors};
use crate::config::{Method, RunConfig};
use crate::layout::{self, AuthorData, EXPERIMENT};
use crate::status::{config_err, RunStatus};

#[derive(Serialize)]
struct TrialRow<'a> {
    seed: u64,
    method: &'a str,
    author: &'a str,
    sentences: usize,
    trial: usize,
    predicted: &'a str,
    correct: bool,
}

#[derive(Serialize)]
struct AccuracyRow<'a> {
    seed: u64,
    method: &'a str,
    author: &'a str,
    sentences: usize,
    accuracy: f64,
}

#[derive(Debug, Serialize, serde::Deserialize)]
pub struct SummaryRow {
    pub method: String,
    pub s: usize,
    pub mean_acc: f64,
    /// Empty with a single seed.
    pub std_acc: Option<f64>,
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    authors: &'a [String],
    excluded: &'a [String],
    seeds: Vec<u64>,
    trials: usize,
    sentence_counts: &'a [usize],
    methods: BTreeMap<&'a str, MethodSummary>,
}

#[derive(Serialize)]
struct MethodSummary {
    /// `accuracy[i]` is the mean over seeds at `sentence_counts[i]`.
    mean_accuracy: Vec<f64>,
    std_accuracy: Vec<Option<f64>>,
    per_seed: BTreeMap<u64, Vec<f64>>,
    confusion: Vec<Vec<u64>>,
}

/// Label for the averaged (non-excluded) authors in the accuracy table.
pub const MEAN: &str = "MEAN";

pub fn run(cfg: &RunConfig) -> anyhow::Result<RunStatus> {
    cfg.validate().map_err(config_err)?;
    let mut status = RunStatus::default();
    let authors = load_authors(cfg, &mut status)?;
    let unknown: Vec<&String> = cfg
        .experiment
        .excluded
        .iter()
        .filter(|e| !authors.iter().any(|a| &a.author == *e))
        .collect();
    if !unknown.is_empty() {
        return Err(config_err(anyhow::anyhow!("excluded authors not in the corpus: {unknown:?}")));
    }
    let out_dir = cfg.stage_dir(EXPERIMENT);
    layout::create_dir(&out_dir)?;
    let names: Vec<String> = authors.iter().map(|a| a.author.clone()).collect();

    let mut reports = Vec::new();
    for &seed in &cfg.seeds {
        match run_seed(cfg, &authors, seed) {
            Ok((report, s)) => {
                status.merge(s);
                reports.push(report);
            }
            Err(e) => status.fail(&format!("experiment seed {seed}"), &e),
        }
    }

    let mut trials = layout::csv_writer(&out_dir.join("trials.csv"))?;
    let mut acc = layout::csv_writer(&out_dir.join("accuracy.csv"))?;
    for r in &reports {
        for t in &r.trials {
            trials.serialize(TrialRow {
                seed: r.seed,
                method: &r.methods[t.method],
                author: &r.authors[t.true_author],
                sentences: t.sentences,
                trial: t.trial,
                predicted: &r.authors[t.predicted],
                correct: t.predicted == t.true_author,
            })?;
        }
        for (mi, m) in r.methods.iter().enumerate() {
            for &s in &r.sentence_counts {
                for (ai, a) in r.authors.iter().enumerate() {
                    if let Some(accuracy) = r.author_accuracy(mi, ai, s) {
                        acc.serialize(AccuracyRow { seed: r.seed, method: m, author: a, sentences: s, accuracy })?;
                    }
                }
                if let Some(accuracy) = r.accuracy(mi, s) {
                    acc.serialize(AccuracyRow { seed: r.seed, method: m, author: MEAN, sentences: s, accuracy })?;
                }
            }
        }
    }
    trials.flush()?;
    acc.flush()?;

    let mut summary = layout::csv_writer(&out_dir.join("summary.csv"))?;
    let mut json_methods = BTreeMap::new();
    for &m in &cfg.experiment.methods {
        let runs: Vec<(&ExperimentReport, usize)> = reports
            .iter()
            .filter_map(|r| r.methods.iter().position(|x| x == m.name()).map(|i| (r, i)))
            .collect();
        if runs.is_empty() {
            continue;
        }
        let mut ms = MethodSummary {
            mean_accuracy: Vec::new(),
            std_accuracy: Vec::new(),
            per_seed: runs.iter().map(|(r, _)| (r.seed, Vec::new())).collect(),
            confusion: vec![vec![0; names.len()]; names.len()],
        };
        for &s in &cfg.experiment.sentence_counts {
            let values: Vec<f64> = runs.iter().filter_map(|(r, i)| r.accuracy(*i, s)).collect();
            if values.len() != runs.len() {
                continue; // every author excluded, or no trials
            }
            for ((r, _), v) in runs.iter().zip(&values) {
                ms.per_seed.get_mut(&r.seed).unwrap().push(*v);
            }
            let (mean_acc, std_acc) = match MeanStd::of(&values) {
                Ok(x) => (x.mean, Some(x.std)),
                Err(_) => (values[0], None),
            };
            ms.mean_accuracy.push(mean_acc);
            ms.std_accuracy.push(std_acc);
            summary.serialize(SummaryRow { method: m.name().into(), s, mean_acc, std_acc })?;
        }
        for (r, i) in &runs {
            for (row, counts) in ms.confusion.iter_mut().zip(r.confusion_matrix(*i)) {
                row.iter_mut().zip(counts).for_each(|(a, b)| *a += b);
            }
        }
        write_confusion(cfg, m, &names, &ms.confusion)?;
        json_methods.insert(m.name(), ms);
    }
    summary.flush()?;

    let json = JsonSummary {
        authors: &names,
        excluded: &cfg.experiment.excluded,
        seeds: reports.iter().map(|r| r.seed).collect(),
        trials: cfg.experiment.trials,
        sentence_counts: &cfg.experiment.sentence_counts,
        methods: json_methods,
    };
    let path = out_dir.join("summary.json");
    fs::write(&path, serde_json::to_string_pretty(&json)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    for (name, m) in &json.methods {
        let show = |s: usize| {
            cfg.experiment.sentence_counts.iter().position(|&x| x == s).and_then(|i| m.mean_accuracy.get(i))
        };
        if let (Some(a1), Some(a5)) = (show(1), show(5)) {
            println!("{name}: accuracy {a1:.3} at 1 sentence, {a5:.3} at 5 sentences");
        }
    }
    Ok(status)
}

/// Sweeps every method for one split seed. A method missing any author's
/// model is reported and left out.
fn run_seed(cfg: &RunConfig, authors: &[AuthorData], seed: u64) -> anyhow::Result<(ExperimentReport, RunStatus)> {
    let mut status = RunStatus::default();
    let mut pools = Vec::new();
    for a in authors {
        pools.push(a.split(cfg, seed)?.test_words());
    }
    let mut loaded: Vec<(Method, Vec<AuthorModel>)> = Vec::new();
    'methods: for &m in &cfg.experiment.methods {
        let mut models = Vec::new();
        for a in authors {
            match load_model(cfg, m, &a.author, seed) {
                Ok(model) => models.push(AuthorModel::new(a.author.clone(), a.processed.vocabulary.clone(), model)),
                Err(e) => {
                    status.fail(&format!("experiment {} seed {seed}", m.name()), &e);
                    continue 'methods;
                }
            }
        }
        loaded.push((m, models));
    }
    if loaded.is_empty() {
        anyhow::bail!("no method has a complete set of models");
    }
    let methods: Vec<MethodModels> = loaded
        .iter()
        .map(|(m, models)| MethodModels { method: m.name().into(), models })
        .collect();
    let sweep = SweepConfig {
        sentence_counts: cfg.experiment.sentence_counts.clone(),
        trials: cfg.experiment.trials,
        seed,
        excluded: cfg.experiment.excluded.clone(),
        workers: cfg.workers,
    };
    Ok((accuracy_sweep(&methods, &pools, &sweep)?, status))
}

fn write_confusion(cfg: &RunConfig, m: Method, names: &[String], counts: &[Vec<u64>]) -> anyhow::Result<()> {
    let mut w = layout::csv_writer(&cfg.stage_dir(EXPERIMENT).join(format!("confusion_{}.csv", m.name())))?;
    let mut header = vec!["true\\predicted".to_string()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    for (name, row) in names.iter().zip(counts) {
        let mut rec = vec![name.clone()];
        rec.extend(row.iter().map(u64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
