//! Seed derivation.
//!
//! Every randomized routine takes a 64-bit seed and drives a ChaCha8 stream
//! from it. Sub-seeds for trials, lines or benchmark cells are derived from a
//! master seed with [`sub_seed`]: the SplitMix64 finalizer applied to
//! `master + (index + 1) * 0x9E37_79B9_7F4A_7C15` (wrapping). The scheme only
//! uses 64-bit integer arithmetic, so it is identical on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SolverRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sub_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng_from_seed(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_seeds_are_stable_and_distinct() {
        // Pinned so that seed derivation cannot drift silently.
        assert_eq!(sub_seed(0, 0), splitmix64(GOLDEN_GAMMA));
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|k| sub_seed(42, k)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(sub_seed(7, 3), sub_seed(7, 3));
    }
}
