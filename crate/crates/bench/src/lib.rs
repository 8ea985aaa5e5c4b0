//! Fixtures shared by the benchmarks.

use stabsim_core::rng::Substreams;
use stabsim_core::{Distribution, TrainingSet};

/// A deterministic `m`-point sample from `dist`.
pub fn fixture(dist: &Distribution, m: usize, seed: u64) -> TrainingSet {
    dist.sample_set(&mut Substreams::new(seed).trial(0), m)
        .expect("m >= 1")
}
