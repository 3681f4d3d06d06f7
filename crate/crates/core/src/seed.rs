//! Seed derivation for index-parallel Monte Carlo.
//!
//! A task seed is `splitmix64(master ^ splitmix64(task + GOLDEN))`, where
//! `splitmix64` is the standard finaliser of Steele, Lea and Flood's
//! SplitMix64 generator. Each derived seed initialises an independent
//! ChaCha8 stream, so sample `i` depends only on `(master, i)` and never on
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for task `task` under master seed `master`.
pub fn derive(master: u64, task: u64) -> u64 {
    splitmix64(master ^ splitmix64(task.wrapping_add(GOLDEN)))
}

/// RNG for task `task` under master seed `master`.
pub fn task_rng(master: u64, task: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, task))
}

/// RNG seeded directly from `seed` (no derivation step).
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
