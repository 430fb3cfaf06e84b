//! Frequent itemset mining toolkit: sequential miners, FI sampling, PBEC
//! scheduling and a deterministic simulated Parallel-FIMI cluster.

pub mod cluster;
pub mod datagen;
pub mod error;
pub mod itemset;
pub mod miners;
pub mod sampling;
pub mod scheduler;
pub mod stats;

pub use error::{Error, Result};
pub use itemset::{Item, Itemset, Pbec, Tid, Tidlist, Transaction, TransactionDb};
pub use miners::FiRecord;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used by every randomized operation.
pub type Rng = ChaCha8Rng;

/// Seeded generator. Every randomized op in the crate takes one of these.
pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for simulated worker `id` (0-based) of a run seeded with `seed`.
pub fn worker_rng(seed: u64, id: usize) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(id as u64 + 1);
    r
}
