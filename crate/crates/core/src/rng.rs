//! Seeded random streams.
//!
//! Every random decision in the crate draws from [`Rng`], a xoshiro256++
//! generator whose 256-bit state is expanded from a 64-bit seed with SplitMix64.
//! Both algorithms are fixed, so a seed produces the same stream on every platform.
//! Independent streams (one per trial, per model, ...) are derived by hashing a
//! tuple of integers into a seed with [`derive_seed`].

use rand::{Rng as _, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type Rng = Xoshiro256PlusPlus;

/// First path element of each derived stream, one per use site.
pub mod label {
    pub const SPLIT: u64 = 1;
    pub const INIT: u64 = 2;
    pub const SHUFFLE: u64 = 3;
    pub const SYNTH: u64 = 4;
    pub const TRIAL: u64 = 5;
    pub const SYNTH_TABLE: u64 = 6;
}

pub fn seeded(seed: u64) -> Rng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with a path of stream labels into a new seed.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(base), |acc, &label| splitmix64(acc ^ splitmix64(label)))
}

pub fn stream(base: u64, path: &[u64]) -> Rng {
    seeded(derive_seed(base, path))
}

/// Fisher-Yates shuffle with an explicit index draw so the permutation only
/// depends on the generator stream.
pub fn shuffle<T>(rng: &mut Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Draws `k` distinct indices from `0..n` (partial Fisher-Yates).
pub fn sample_without_replacement(rng: &mut Rng, n: usize, k: usize) -> Vec<usize> {
    assert!(k <= n, "cannot draw {k} of {n} without replacement");
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

pub fn uniform_f64(rng: &mut Rng) -> f64 {
    rng.gen::<f64>()
}
