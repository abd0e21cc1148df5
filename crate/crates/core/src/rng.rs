//! Seeded random streams.
//!
//! Every random draw in the crate comes from ChaCha8 keyed by a 64-bit seed
//! (`ChaCha8Rng::seed_from_u64`). Independent consumers (one sampled task,
//! one episode, one property case) get their own child stream selected with
//! `set_stream(index)`, so draw `k` does not depend on how many draws came
//! before it or on which thread made them. ChaCha output is platform
//! independent.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Default seed used when none is given on the command line.
pub const DEFAULT_SEED: u64 = 20210707;

/// Child stream `index` of the generator seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derives a sub-seed for a named purpose (layouts, evaluation episodes,
/// training) so that differently-purposed streams never coincide.
pub fn derive_seed(seed: u64, purpose: &str) -> u64 {
    // FNV-1a over the purpose tag, mixed with the seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in purpose.bytes().chain(seed.to_le_bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}
