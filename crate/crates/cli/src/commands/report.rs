use std::path::Path;

use serde::de::DeserializeOwned;

use super::{eval, experiment};
use crate::config::RunConfig;
use crate::layout::{EVAL, EXPERIMENT};
use crate::status::{config_err, RunStatus};

fn read_rows<T: DeserializeOwned>(path: &Path) -> anyhow::Result<Option<Vec<T>>> {
    if !path.exists() {
        return Ok(None);
    }
    let rows = csv::Reader::from_path(path)?.deserialize().collect::<Result<Vec<T>, _>>()?;
    Ok(Some(rows))
}

/// Prints the eval and experiment summaries as plain-text tables.
pub fn run(cfg: &RunConfig) -> anyhow::Result<RunStatus> {
    let pp: Option<Vec<eval::SummaryRow>> = read_rows(&cfg.stage_dir(EVAL).join("summary.csv"))?;
    let acc: Option<Vec<experiment::SummaryRow>> = read_rows(&cfg.stage_dir(EXPERIMENT).join("summary.csv"))?;
    if pp.is_none() && acc.is_none() {
        return Err(config_err(anyhow::anyhow!(
            "nothing to report under {}; run `eval` or `experiment` first",
            cfg.output_dir.display()
        )));
    }
    if let Some(rows) = pp {
        println!("test perplexity (mean±std over seeds)");
        println!("{:<8} {:<20} {:>16}", "method", "author", "perplexity");
        for r in rows {
            println!("{:<8} {:<20} {:>16}", r.method, r.author, r.formatted);
        }
        println!();
    }
    if let Some(rows) = acc {
        println!("accuracy vs. test length in sentences");
        println!("{:<8} {:>4} {:>10} {:>10}", "method", "s", "mean", "std");
        for r in rows {
            let std = r.std_acc.map(|s| format!("{s:.4}")).unwrap_or_else(|| "-".into());
            println!("{:<8} {:>4} {:>10.4} {:>10}", r.method, r.s, r.mean_acc, std);
        }
    }
    Ok(RunStatus::default())
}
