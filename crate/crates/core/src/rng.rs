//! Seeded random streams.
//!
//! Every Monte Carlo realization draws from its own ChaCha8 stream, seeded
//! by folding the realization index into the master seed with SplitMix64:
//!
//! ```text
//! seed = splitmix64(master_seed ^ splitmix64(realization_index))
//! ```
//!
//! Realizations are therefore independent of each other and of the order in
//! which they are executed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn substream_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(index))
}

/// Generator for realization `index` under `master_seed`.
pub fn substream(master_seed: u64, index: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(substream_seed(master_seed, index))
}
