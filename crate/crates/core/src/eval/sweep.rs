//! Accuracy versus test-text length.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng;

use super::classify::{argmin, AuthorModel};
use super::perplexity::PerplexityReport;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SweepConfig {
    /// Test-text lengths (in sentences) to evaluate, e.g. `1..=20`.
    pub sentence_counts: Vec<usize>,
    /// Trials per (author, length).
    pub trials: usize,
    pub seed: u64,
    /// Authors left out of averaged accuracies (still classified and still candidates).
    pub excluded: Vec<String>,
    /// Worker threads; results do not depend on this.
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            sentence_counts: (1..=20).collect(),
            trials: 100,
            seed: 0,
            excluded: Vec::new(),
            workers: 1,
        }
    }
}

/// Candidate models for one method, in author order.
pub struct MethodModels<'a> {
    pub method: String,
    pub models: &'a [AuthorModel],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub method: usize,
    pub true_author: usize,
    pub sentences: usize,
    pub trial: usize,
    pub predicted: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub seed: u64,
    pub methods: Vec<String>,
    pub authors: Vec<String>,
    pub excluded: Vec<String>,
    pub sentence_counts: Vec<usize>,
    pub trials: Vec<TrialOutcome>,
}

impl ExperimentReport {
    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    fn included(&self, author: usize) -> bool {
        !self.excluded.contains(&self.authors[author])
    }

    fn rate<'a>(outcomes: impl Iterator<Item = &'a TrialOutcome>) -> Option<f64> {
        let (n, hits) = outcomes.fold((0usize, 0usize), |(n, h), t| {
            (n + 1, h + usize::from(t.predicted == t.true_author))
        });
        (n > 0).then(|| hits as f64 / n as f64)
    }

    /// Accuracy over every non-excluded author at text length `s`.
    pub fn accuracy(&self, method: usize, s: usize) -> Option<f64> {
        Self::rate(
            self.trials
                .iter()
                .filter(|t| t.method == method && t.sentences == s && self.included(t.true_author)),
        )
    }

    pub fn author_accuracy(&self, method: usize, author: usize, s: usize) -> Option<f64> {
        Self::rate(
            self.trials
                .iter()
                .filter(|t| t.method == method && t.sentences == s && t.true_author == author),
        )
    }

    /// `(s, accuracy)` for every swept length with at least one trial.
    pub fn accuracy_curve(&self, method: usize) -> Vec<(usize, f64)> {
        self.sentence_counts
            .iter()
            .filter_map(|&s| self.accuracy(method, s).map(|a| (s, a)))
            .collect()
    }

    /// `m[i][j]` = trials of true author `i` attributed to `j`, over all lengths.
    pub fn confusion_matrix(&self, method: usize) -> Vec<Vec<u64>> {
        let k = self.authors.len();
        let mut m = vec![vec![0u64; k]; k];
        for t in self.trials.iter().filter(|t| t.method == method) {
            m[t.true_author][t.predicted] += 1;
        }
        m
    }
}

/// Per-sentence scores of every test sentence under every candidate model:
/// `table[candidate][author][sentence]`.
pub type ScoreTable = Vec<Vec<Vec<PerplexityReport>>>;

pub fn score_table<S: AsRef<str> + Sync>(
    models: &[AuthorModel],
    test_pools: &[Vec<Vec<S>>],
) -> Result<ScoreTable> {
    let jobs: Vec<(usize, usize)> = (0..models.len())
        .flat_map(|k| (0..test_pools.len()).map(move |a| (k, a)))
        .collect();
    let scored = jobs
        .par_iter()
        .map(|&(k, a)| {
            test_pools[a]
                .iter()
                .map(|s| models[k].score(std::slice::from_ref(s)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut it = scored.into_iter();
    Ok((0..models.len())
        .map(|_| (0..test_pools.len()).map(|_| it.next().unwrap()).collect())
        .collect())
}

/// Repeatedly samples `s` test sentences (without replacement) from each
/// author's pool and attributes them with every method.
///
/// Each trial draws from its own stream keyed by `(seed, author, s, trial)`,
/// so all methods see the same sentences and the report does not depend on
/// `workers`. Pooled perplexity is accumulated from per-sentence scores, which
/// is the same token stream `classify` scores.
pub fn accuracy_sweep<S: AsRef<str> + Sync>(
    methods: &[MethodModels<'_>],
    test_pools: &[Vec<Vec<S>>],
    config: &SweepConfig,
) -> Result<ExperimentReport> {
    let authors: Vec<String> = match methods.first() {
        Some(m) => m.models.iter().map(|a| a.author.clone()).collect(),
        None => return Err(Error::invalid("no methods to sweep")),
    };
    for m in methods {
        let names: Vec<&str> = m.models.iter().map(|a| a.author.as_str()).collect();
        if names != authors.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(Error::invalid(format!("method {} has a different author list", m.method)));
        }
    }
    if test_pools.len() != authors.len() {
        return Err(Error::invalid(format!(
            "{} test pools for {} authors",
            test_pools.len(),
            authors.len()
        )));
    }
    let max_s = config.sentence_counts.iter().copied().max().unwrap_or(0);
    if config.sentence_counts.contains(&0) {
        return Err(Error::invalid("sentence counts must be >= 1"));
    }
    for (a, pool) in test_pools.iter().enumerate() {
        if pool.len() < max_s {
            return Err(Error::InsufficientPool {
                author: authors[a].clone(),
                available: pool.len(),
                requested: max_s,
            });
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;

    let trials = pool.install(|| -> Result<Vec<TrialOutcome>> {
        let mut out = Vec::new();
        if config.trials == 0 {
            return Ok(out);
        }
        let tables = methods
            .iter()
            .map(|m| score_table(m.models, test_pools))
            .collect::<Result<Vec<_>>>()?;
        let draws: Vec<(usize, usize, usize)> = (0..authors.len())
            .flat_map(|a| {
                config
                    .sentence_counts
                    .iter()
                    .flat_map(move |&s| (0..config.trials).map(move |t| (a, s, t)))
            })
            .collect();
        let picked: Vec<Vec<usize>> = draws
            .par_iter()
            .map(|&(a, s, t)| {
                let mut r = rng::stream(config.seed, &[rng::label::TRIAL, a as u64, s as u64, t as u64]);
                rng::sample_without_replacement(&mut r, test_pools[a].len(), s)
            })
            .collect();
        for (mi, table) in tables.iter().enumerate() {
            let outcomes: Vec<TrialOutcome> = draws
                .par_iter()
                .zip(&picked)
                .map(|(&(a, s, t), idx)| {
                    let pp: Vec<f64> = table
                        .iter()
                        .map(|cand| {
                            idx.iter()
                                .map(|&i| cand[a][i])
                                .reduce(PerplexityReport::merge)
                                .expect("s >= 1")
                                .perplexity()
                        })
                        .collect();
                    TrialOutcome {
                        method: mi,
                        true_author: a,
                        sentences: s,
                        trial: t,
                        predicted: argmin(&pp),
                    }
                })
                .collect();
            out.extend(outcomes);
        }
        Ok(out)
    })?;

    Ok(ExperimentReport {
        seed: config.seed,
        methods: methods.iter().map(|m| m.method.clone()).collect(),
        authors,
        excluded: config.excluded.clone(),
        sentence_counts: config.sentence_counts.clone(),
        trials,
    })
}
