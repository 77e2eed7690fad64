//! Seeded random streams.
//!
//! Every run owns one [`Stream`]. Streams are ChaCha8 generators keyed by a
//! 64-bit seed and a stream id, so independent consumers (data generation,
//! coordinate sampling, initial points) never share state. Index sampling
//! uses integer arithmetic only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Stream = ChaCha8Rng;

/// Stream ids used across the crate.
pub mod ids {
    pub const DATA: u64 = 1;
    pub const COORDINATES: u64 = 2;
    pub const COMPONENTS: u64 = 3;
    pub const INIT: u64 = 4;
}

pub fn stream(seed: u64, id: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

pub fn index(rng: &mut Stream, n: usize) -> usize {
    rng.random_range(0..n)
}

pub fn normal(rng: &mut Stream) -> f64 {
    rng.sample(StandardNormal)
}

pub fn normal_vec(rng: &mut Stream, n: usize) -> Vec<f64> {
    (0..n).map(|_| normal(rng)).collect()
}
