//! Seed derivation for reproducible replicate streams.
//!
//! Every random draw in the crate flows from a single root seed. Replicate `k`
//! of a run seeded with `s` uses `mix64(s, k)`, where
//!
//! ```text
//! splitmix64(z):
//!     z = z + 0x9E3779B97F4A7C15
//!     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!     return z ^ (z >> 31)
//!
//! mix64(seed, k) = splitmix64(seed ^ splitmix64(k))
//! ```
//!
//! with all arithmetic wrapping modulo 2^64. Streams are then generated by
//! ChaCha8 seeded from the derived 64-bit value.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for replicate `k` of a run rooted at `seed`.
#[inline]
pub fn mix64(seed: u64, k: u64) -> u64 {
    splitmix64(seed ^ splitmix64(k))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
