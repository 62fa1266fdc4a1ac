//! Seeded random streams. Replication `r` of an experiment always reads
//! stream `r` of the master seed, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream reserved for quantities drawn once per experiment, before the
/// replication loop.
pub const FROZEN_STREAM: u64 = u64::MAX;

pub fn stream(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Stream index for replication `rep` of grid cell `cell`.
pub fn cell_stream(cell: u32, rep: u32) -> u64 {
    ((cell as u64) << 32) | rep as u64
}
