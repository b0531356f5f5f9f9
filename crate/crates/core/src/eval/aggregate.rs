use std::fmt;

use crate::error::{Error, Result};

/// Sample mean and standard deviation (n - 1 denominator).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid(format!(
                "mean/std needs at least 2 values, got {}",
                values.len()
            )));
        }
        let n = values.len() as f64;
        // shifted by the first value so identical inputs give exactly std = 0
        let base = values[0];
        let mean = base + values.iter().map(|v| v - base).sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Ok(MeanStd { mean, std: var.sqrt() })
    }
}

/// `67.3±2.4` style; precision defaults to one decimal.
impl fmt::Display for MeanStd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(1);
        write!(f, "{:.p$}±{:.p$}", self.mean, self.std)
    }
}

/// Cell-wise mean ± std across per-seed metric vectors of equal length.
pub fn aggregate_over_seeds(per_seed: &[Vec<f64>]) -> Result<Vec<MeanStd>> {
    if per_seed.len() < 2 {
        return Err(Error::invalid("aggregation needs at least 2 seeds"));
    }
    let cells = per_seed[0].len();
    if per_seed.iter().any(|r| r.len() != cells) {
        return Err(Error::invalid("per-seed reports have different shapes"));
    }
    (0..cells)
        .map(|c| MeanStd::of(&per_seed.iter().map(|r| r[c]).collect::<Vec<_>>()))
        .collect()
}
