//! Per-run random streams. One seed per run; reward draws and sampler coins use
//! different ChaCha streams so that swapping algorithms never shifts the rewards.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const REWARD_STREAM: u64 = 0;
pub const SAMPLER_STREAM: u64 = 1;

pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}
