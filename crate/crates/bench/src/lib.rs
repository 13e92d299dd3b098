//! Inputs shared by the benchmarks.

use quadembed::exact::{int, rat};
use quadembed::{EmbeddingCertificate, EmbeddingParams, IntervalSystem};

pub const FIXTURE: &str = include_str!("../../../fixtures/intro_9.txt");

pub fn fixture() -> EmbeddingCertificate {
    EmbeddingCertificate::parse(FIXTURE).expect("fixture parses")
}

pub fn params(m: u64, n: u64, r: u64, s: u64) -> EmbeddingParams {
    EmbeddingParams::new(m, n, r, s, 1).expect("valid tuple")
}

/// A long interval system with mixed fractional upper bounds.
pub fn interval_system(len: i64) -> IntervalSystem {
    let entries = (0..len)
        .map(|i| (int(i % 7 - 3), rat(20 + i % 11, 1 + i % 3)))
        .collect();
    IntervalSystem::from_entries(entries, int(len * 5)).expect("valid system")
}
