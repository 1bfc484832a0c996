//! Seed derivation.
//!
//! Every random draw in the simulator comes from a ChaCha8 stream keyed by a
//! 64-bit seed. Sub-seeds are derived from a master seed and a tuple of
//! counters (experiment tag, cell, trial, stream, ...) with the SplitMix64
//! finalizer, so any single trial can be replayed in isolation and the
//! results do not depend on how trials are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::C64;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a sub-seed from `seed` and an ordered list of counters.
pub fn derive_seed(seed: u64, counters: &[u64]) -> u64 {
    counters
        .iter()
        .fold(splitmix64(seed), |acc, &c| splitmix64(acc ^ splitmix64(c)))
}

/// Seeded generator for the given counters.
pub fn stream(seed: u64, counters: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, counters))
}

/// Draws a circularly-symmetric complex Gaussian with the given variance.
pub fn complex_gaussian<R: rand::Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * s, im * s)
}

/// Stream tags used with [`derive_seed`].
pub mod tags {
    pub const SYMBOLS: u64 = 1;
    pub const SENSING_NOISE: u64 = 2;
    pub const CHANNEL: u64 = 3;
    pub const COMM_NOISE: u64 = 4;
    pub const CP_INIT: u64 = 5;
}
