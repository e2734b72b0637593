//! Deterministic seed derivation.
//!
//! Every random stream is `ChaCha8` seeded from `seed ^ TAG`, where the seed
//! itself is a SplitMix64 hash of the base seed and a drop or trial index.
//! Streams therefore depend only on indices, never on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const TAG_GEOMETRY: u64 = 0x6765_6f6d_6574_7279;
pub const TAG_FADING: u64 = 0x6661_6469_6e67_0000;
pub const TAG_SYMBOLS: u64 = 0x7379_6d62_6f6c_7300;
pub const TAG_NOISE: u64 = 0x6e6f_6973_6500_0000;

const DROP_DOMAIN: u64 = 0xd509_0000_0000_0001;
const TRIAL_DOMAIN: u64 = 0x7219_0000_0000_0002;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream for a tagged purpose.
pub fn stream(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag)
}

/// Seed of drop `index` within a run.
pub fn drop_seed(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base ^ DROP_DOMAIN).wrapping_add(index))
}

/// Seed of trial `index` within a run.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base ^ TRIAL_DOMAIN).wrapping_add(index))
}
