//! Interpolated Kneser-Ney n-gram baseline.

mod arpa;
mod counts;
mod model;

pub use counts::{
    discount_from_counts, estimate_discounts, CountTables, NgramMap, DISCOUNT_FALLBACK, DISCOUNT_MAX,
    DISCOUNT_MIN,
};
pub use model::{KnModel, NgramEntry};
