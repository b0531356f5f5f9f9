use crate::error::{Error, Result};
use crate::rng;

/// A seeded partition of sentence indices into train / validation / test.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitAssignment {
    pub seed: u64,
    pub ratios: [f64; 3],
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitPart {
    Train,
    Validation,
    Test,
}

pub const DEFAULT_RATIOS: [f64; 3] = [0.8, 0.1, 0.1];

impl SplitAssignment {
    /// Shuffles `0..n` with the seeded generator and cuts it by `ratios`.
    /// Validation and test get `floor(n * ratio)` sentences; the remainder
    /// goes to train. Index sets are returned sorted.
    pub fn new(n: usize, seed: u64, ratios: [f64; 3]) -> Result<Self> {
        if n < 10 {
            return Err(Error::invalid(format!("need at least 10 sentences to split, got {n}")));
        }
        if ratios.iter().any(|r| !(0.0..=1.0).contains(r))
            || (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9
        {
            return Err(Error::invalid(format!("split ratios {ratios:?} must be in [0,1] and sum to 1")));
        }
        let part = |r: f64| (n as f64 * r + 1e-9).floor() as usize;
        let n_valid = part(ratios[1]);
        let n_test = part(ratios[2]);
        let n_train = n - n_valid - n_test;

        let mut order: Vec<usize> = (0..n).collect();
        rng::shuffle(&mut rng::stream(seed, &[rng::label::SPLIT]), &mut order);
        let sorted = |s: &[usize]| {
            let mut v = s.to_vec();
            v.sort_unstable();
            v
        };
        Ok(SplitAssignment {
            seed,
            ratios,
            train: sorted(&order[..n_train]),
            validation: sorted(&order[n_train..n_train + n_valid]),
            test: sorted(&order[n_train + n_valid..]),
        })
    }

    pub fn part(&self, part: SplitPart) -> &[usize] {
        match part {
            SplitPart::Train => &self.train,
            SplitPart::Validation => &self.validation,
            SplitPart::Test => &self.test,
        }
    }
}
