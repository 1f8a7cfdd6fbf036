//! Seed derivation for reproducible random streams.
//!
//! `derive_trial_seed(master, i)` is bit-exactly the `(i + 1)`-th output of a
//! SplitMix64 generator seeded with `master`:
//!
//! ```text
//! z = master + (i + 1) * 0x9E3779B97F4A7C15        (wrapping)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9          (wrapping)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB          (wrapping)
//! z ^ (z >> 31)
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output finalizer.
#[inline]
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub fn derive_trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64_mix(master_seed.wrapping_add(trial_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Generator used for every random draw in the crate.
pub type GameRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GameRng {
    ChaCha8Rng::seed_from_u64(seed)
}
