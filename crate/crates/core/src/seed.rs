//! Seed plumbing: every random quantity in the crate is drawn from a
//! generator derived deterministically from `(master_seed, stream_id,
//! trial_index)`, so experiments reproduce bit-for-bit under any degree of
//! parallelism.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Identifies one logical random stream of an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        SeedSpec {
            master_seed,
            stream_id,
        }
    }

    /// Sub-stream with the same master seed.
    pub fn stream(&self, stream_id: u64) -> SeedSpec {
        SeedSpec {
            master_seed: self.master_seed,
            stream_id,
        }
    }

    /// Generator for one trial. Distinct `(master_seed, stream_id,
    /// trial_index)` triples yield independent-looking streams.
    pub fn rng(&self, trial_index: u64) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[0..8].copy_from_slice(&self.master_seed.to_le_bytes());
        seed[8..16].copy_from_slice(&self.stream_id.to_le_bytes());
        seed[16..24].copy_from_slice(&trial_index.to_le_bytes());
        let mix = splitmix(splitmix(splitmix(self.master_seed) ^ self.stream_id) ^ trial_index);
        seed[24..32].copy_from_slice(&mix.to_le_bytes());
        ChaCha8Rng::from_seed(seed)
    }
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fixed stream ids, so unrelated parts of a run never share a generator.
pub mod streams {
    pub const CONSTRUCTION: u64 = 0;
    pub const NEGATIVE_TRIALS: u64 = 1;
    pub const POSITIVE_TRIALS: u64 = 2;
    pub const COVERAGE_MC: u64 = 3;
    pub const FAMILY_GEN: u64 = 4;
    pub const PROCESS_MC: u64 = 5;
}
