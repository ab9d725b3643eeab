//! Seeded generators and seed derivation.
//!
//! Every random quantity in the crate is produced by a [`SeededGenerator`]
//! built from a 64-bit seed. Parallel work derives one seed per task index
//! with [`mix64`], so results never depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate. ChaCha output is stable across
/// platforms and `rand` releases.
pub type SeededGenerator = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer (Steele, Lea and Flood, 2014).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of task `index` from `seed`.
///
/// `mix64(s, i) = splitmix64(s ^ splitmix64(i))`.
pub fn mix64(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

pub fn generator(seed: u64) -> SeededGenerator {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for task `index` under `seed`.
pub fn derived(seed: u64, index: u64) -> SeededGenerator {
    generator(mix64(seed, index))
}

/// A uniform draw on the open interval (0, 1).
#[inline]
pub fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(rand::distributions::Open01)
}
