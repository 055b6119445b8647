//! Seeding conventions.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`). A master
//! seed is never consumed sequentially across independent work items;
//! instead each item gets its own generator:
//!
//! * sample chunk `c` of a draw uses the ChaCha stream `c` of the key
//!   derived from the seed, so chunks can be generated in any order;
//! * experiment trial `i` uses the seed [`derive_seed`]`(seed, i)`.
//!
//! Output is therefore identical for any number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Number of variates produced by one generator stream.
pub const CHUNK_LEN: usize = 1 << 14;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the `index`-th independent sub-task of a run seeded with `seed`:
/// `splitmix64(seed + (index + 1) · 0x9E3779B97F4A7C15)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Generator for chunk `chunk` of a draw seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}
