//! Seed derivation. Every randomized routine takes a generator built here so
//! that runs are reproducible and parallel streams never overlap.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a 64-bit stream seed from a base seed and a path of context ids.
pub fn derive(seed: u64, ctx: &[u64]) -> u64 {
    ctx.iter().fold(mix(seed), |acc, &c| mix(acc ^ mix(c)))
}

/// A generator for the stream named by `ctx` under `seed`.
pub fn stream(seed: u64, ctx: &[u64]) -> Rng {
    Rng::seed_from_u64(derive(seed, ctx))
}
