use std::fs;

use anyhow::Context;
use authorship_lm::rng;
use authorship_lm::text::{generate_synthetic_corpus, synthetic_lexicon, MarkovSpec};

use crate::config::RunConfig;
use crate::layout::{self, SYNTH};
use crate::status::{config_err, RunStatus};

/// Writes `<corpus_dir>/authorNN.txt` (one sentence per line) and the
/// generating chain of each author to `<output_dir>/synth/authorNN.json`.
pub fn run(cfg: &RunConfig) -> anyhow::Result<RunStatus> {
    cfg.validate().map_err(config_err)?;
    let s = &cfg.synth;
    if cfg.corpus_dir.is_dir() && !layout::files_with_extension(&cfg.corpus_dir, "txt")?.is_empty() {
        return Err(config_err(anyhow::anyhow!(
            "{} already holds author files; synth only writes into an empty corpus directory",
            cfg.corpus_dir.display()
        )));
    }
    let words = synthetic_lexicon(s.lexicon, 0);
    let specs = (0..s.authors)
        .map(|a| {
            let table_seed = rng::derive_seed(s.seed, &[rng::label::SYNTH_TABLE, a as u64]);
            MarkovSpec::random(words.clone(), s.branching.min(words.len()), s.end_prob, table_seed)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(config_err)?;

    layout::create_dir(&cfg.corpus_dir)?;
    let spec_dir = cfg.stage_dir(SYNTH);
    layout::create_dir(&spec_dir)?;
    for (a, spec) in specs.iter().enumerate() {
        let author = format!("author{a:02}");
        let corpus = generate_synthetic_corpus(&author, spec, rng::derive_seed(s.seed, &[a as u64]), s.sentences)?;
        let path = cfg.corpus_dir.join(format!("{author}.txt"));
        fs::write(&path, corpus.sentences().join("\n") + "\n").with_context(|| format!("writing {}", path.display()))?;
        let path = spec_dir.join(format!("{author}.json"));
        fs::write(&path, serde_json::to_string(spec)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    eprintln!("wrote {} synthetic authors to {}", s.authors, cfg.corpus_dir.display());
    Ok(RunStatus::default())
}
