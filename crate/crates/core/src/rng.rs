//! Seeded random number generation shared by every stochastic operation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for every seeded run.
pub type RunRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> RunRng {
    ChaCha8Rng::seed_from_u64(seed)
}
