//! Run configuration: built-in defaults, then the TOML file, then flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use authorship_lm::nnlm::NnlmConfig;
use authorship_lm::text::PipelineParams;
use clap::Args;
use serde::{Deserialize, Serialize};

use crate::status::ConfigError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// One `<author>.txt` file per author, one sentence per line.
    pub corpus_dir: PathBuf,
    pub output_dir: PathBuf,
    /// Split seeds; every (author, seed) pair gets its own split and models.
    pub seeds: Vec<u64>,
    /// Train / validation / test fractions.
    pub split_ratios: [f64; 3],
    /// Upper bound on worker threads. Outputs do not depend on it.
    pub workers: usize,
    pub pipeline: PipelineParams,
    pub nnlm: NnlmSection,
    pub kn: KnSection,
    pub experiment: ExperimentSection,
    pub synth: SynthSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus_dir: "corpus".into(),
            output_dir: "outputs".into(),
            seeds: vec![1],
            split_ratios: [0.8, 0.1, 0.1],
            workers: 1,
            pipeline: PipelineParams::default(),
            nnlm: NnlmSection::default(),
            kn: KnSection::default(),
            experiment: ExperimentSection::default(),
            synth: SynthSection::default(),
        }
    }
}

/// Network hyperparameters; order and vocabulary size come from the corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NnlmSection {
    pub embed_dim: usize,
    pub hidden_dim: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub patience: usize,
    pub init_scale: f64,
}

impl Default for NnlmSection {
    fn default() -> Self {
        let d = NnlmConfig::default();
        NnlmSection {
            embed_dim: d.embed_dim,
            hidden_dim: d.hidden_dim,
            learning_rate: d.learning_rate,
            momentum: d.momentum,
            batch_size: d.batch_size,
            max_epochs: d.max_epochs,
            patience: d.patience,
            init_scale: d.init_scale,
        }
    }
}

impl NnlmSection {
    /// Base config; per-author order, vocabulary size and seed are filled in later.
    pub fn base(&self, order: usize) -> NnlmConfig {
        NnlmConfig {
            order,
            embed_dim: self.embed_dim,
            hidden_dim: self.hidden_dim,
            learning_rate: self.learning_rate,
            momentum: self.momentum,
            batch_size: self.batch_size,
            max_epochs: self.max_epochs,
            patience: self.patience,
            init_scale: self.init_scale,
            ..NnlmConfig::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KnSection {
    /// Fixed per-order discounts (lowest order first) instead of the
    /// count-of-counts estimate.
    pub discounts: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Nnlm,
    Kn,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Nnlm => "nnlm",
            Method::Kn => "kn",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Method::Nnlm => "nnlm",
            Method::Kn => "arpa",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub methods: Vec<Method>,
    pub sentence_counts: Vec<usize>,
    pub trials: usize,
    /// Authors attributed and used as candidates but left out of averages.
    pub excluded: Vec<String>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            methods: vec![Method::Nnlm, Method::Kn],
            sentence_counts: (1..=20).collect(),
            trials: 100,
            excluded: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub authors: usize,
    pub lexicon: usize,
    pub sentences: usize,
    /// Successors per word in each author's bigram table.
    pub branching: usize,
    pub end_prob: f64,
    pub seed: u64,
}

impl Default for SynthSection {
    fn default() -> Self {
        SynthSection {
            authors: 8,
            lexicon: 50,
            sentences: 2500,
            branching: 6,
            end_prob: 0.12,
            seed: 0,
        }
    }
}

/// Flags that override config values. Shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML config file; flags below take precedence over it
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub corpus_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Comma-separated split seeds
    #[arg(long, global = true, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Disable Porter stemming
    #[arg(long, global = true)]
    pub no_stem: bool,
    #[arg(long, global = true)]
    pub prune_threshold: Option<f64>,
    #[arg(long, global = true)]
    pub embed_dim: Option<usize>,
    #[arg(long, global = true)]
    pub hidden_dim: Option<usize>,
    #[arg(long, global = true)]
    pub learning_rate: Option<f64>,
    #[arg(long, global = true)]
    pub max_epochs: Option<usize>,
    /// Comma-separated methods (nnlm, kn)
    #[arg(long, global = true, value_delimiter = ',')]
    pub methods: Option<Vec<Method>>,
    /// Comma-separated test lengths in sentences
    #[arg(long, global = true, value_delimiter = ',')]
    pub sentence_counts: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Comma-separated authors left out of averaged accuracy
    #[arg(long, global = true, value_delimiter = ',')]
    pub exclude: Option<Vec<String>>,
    #[arg(long, global = true)]
    pub synth_authors: Option<usize>,
    #[arg(long, global = true)]
    pub synth_sentences: Option<usize>,
    #[arg(long, global = true)]
    pub synth_seed: Option<u64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Defaults, then `--config`, then individual flags.
    pub fn resolve(o: &Overrides) -> Result<Self, ConfigError> {
        let mut c = match &o.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))
                    .map_err(ConfigError)?;
                Self::from_toml(&text)
                    .with_context(|| format!("parsing config {}", path.display()))
                    .map_err(ConfigError)?
            }
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($flag:expr => $field:expr) => {
                if let Some(v) = $flag.clone() {
                    $field = v;
                }
            };
        }
        set!(o.corpus_dir => c.corpus_dir);
        set!(o.output_dir => c.output_dir);
        set!(o.seeds => c.seeds);
        set!(o.workers => c.workers);
        set!(o.order => c.pipeline.order);
        if o.no_stem {
            c.pipeline.stem = false;
        }
        set!(o.prune_threshold => c.pipeline.prune_threshold);
        set!(o.embed_dim => c.nnlm.embed_dim);
        set!(o.hidden_dim => c.nnlm.hidden_dim);
        set!(o.learning_rate => c.nnlm.learning_rate);
        set!(o.max_epochs => c.nnlm.max_epochs);
        set!(o.methods => c.experiment.methods);
        set!(o.sentence_counts => c.experiment.sentence_counts);
        set!(o.trials => c.experiment.trials);
        set!(o.exclude => c.experiment.excluded);
        set!(o.synth_authors => c.synth.authors);
        set!(o.synth_sentences => c.synth.sentences);
        set!(o.synth_seed => c.synth.seed);
        Ok(c)
    }

    /// Checks everything that does not depend on files produced by earlier stages.
    pub fn validate(&self) -> anyhow::Result<()> {
        self.pipeline.validate()?;
        self.nnlm.base(self.pipeline.order).validate()?;
        if self.seeds.is_empty() {
            bail!("seed list is empty");
        }
        let mut seen = self.seeds.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.seeds.len() {
            bail!("seed list has duplicates: {:?}", self.seeds);
        }
        if self.split_ratios.iter().any(|r| !(0.0..=1.0).contains(r)) {
            bail!("split ratios must lie in [0, 1]: {:?}", self.split_ratios);
        }
        let sum: f64 = self.split_ratios.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            bail!("split ratios sum to {sum}, not 1");
        }
        if self.workers == 0 {
            bail!("workers must be >= 1");
        }
        if let Some(d) = &self.kn.discounts {
            if d.len() != self.pipeline.order || d.iter().any(|x| !(0.0..1.0).contains(x)) {
                bail!("kn.discounts needs {} values in [0, 1), got {d:?}", self.pipeline.order);
            }
        }
        let e = &self.experiment;
        if e.methods.is_empty() {
            bail!("experiment.methods is empty");
        }
        if e.sentence_counts.is_empty() || e.sentence_counts.contains(&0) {
            bail!("experiment.sentence_counts must be nonempty and >= 1");
        }
        let s = &self.synth;
        if s.authors == 0 || s.sentences == 0 || s.lexicon < 2 || s.branching == 0 {
            bail!("synth: authors, sentences, branching must be >= 1 and lexicon >= 2");
        }
        if !(s.end_prob > 0.0 && s.end_prob < 1.0) {
            bail!("synth.end_prob must be in (0, 1), got {}", s.end_prob);
        }
        Ok(())
    }

    pub fn stage_dir(&self, stage: &str) -> PathBuf {
        self.output_dir.join(stage)
    }
}

pub fn require_dir(path: &Path, what: &str) -> anyhow::Result<()> {
    if !path.is_dir() {
        bail!("{what} {} does not exist", path.display());
    }
    Ok(())
}
