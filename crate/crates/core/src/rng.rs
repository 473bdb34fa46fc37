//! Seeded randomness.
//!
//! Every random draw in the crate comes from ChaCha8 (the ChaCha stream cipher
//! reduced to 8 rounds, run in counter mode) keyed by a 64-bit seed through
//! `SeedableRng::seed_from_u64`. Independent consumers of one seed are kept
//! apart by ChaCha's 64-bit stream id, so a trial's graph draw and its
//! randomized clustering never share a keystream.
//!
//! Bernoulli decisions use [`uniform01`]: the top 53 bits of one `u64` output
//! scaled by `2^-53`, compared with `u < p`. That conversion is fixed here
//! rather than delegated so that edge draws are reproducible from the
//! generator's raw output alone.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// Stream ids used when one trial seed feeds several consumers.
pub mod stream {
    pub const GRAPH: u64 = 0;
    pub const RANDOMIZED_CPQR: u64 = 1;
    pub const KMEANS_PP: u64 = 2;
    pub const EIGEN_START: u64 = 3;
}

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn seeded_stream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw in `[0, 1)` with 53 bits of resolution.
#[inline]
pub fn uniform01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Seed of one trial in one sweep cell:
/// `mix64(mix64(master ^ mix64(cell + γ)) ^ (trial + 2γ))` with wrapping
/// arithmetic and `γ = 0x9e3779b97f4a7c15`.
pub fn trial_seed(master: u64, cell: u64, trial: u64) -> u64 {
    let cell_key = mix64(cell.wrapping_add(GOLDEN_GAMMA));
    let inner = mix64(master ^ cell_key);
    mix64(inner ^ trial.wrapping_add(GOLDEN_GAMMA.wrapping_mul(2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mix64_reference_values() {
        // SplitMix64 outputs for state increments of γ starting at 0.
        assert_eq!(mix64(GOLDEN_GAMMA), 0xe220_a839_7b1d_cdaf);
        assert_eq!(mix64(GOLDEN_GAMMA.wrapping_mul(2)), 0x6e78_9e6a_a1b9_65f4);
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut rng = seeded(7);
        for _ in 0..10_000 {
            let u = uniform01(&mut rng);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = seeded_stream(1, 0);
        let mut b = seeded_stream(1, 1);
        assert_ne!(a.next_u64(), b.next_u64());
        let mut c = seeded_stream(1, 0);
        let mut d = seeded_stream(1, 0);
        assert_eq!(c.next_u64(), d.next_u64());
    }

    #[test]
    fn trial_seeds_distinct() {
        let mut seen = std::collections::HashSet::new();
        for cell in 0..50 {
            for trial in 0..50 {
                assert!(seen.insert(trial_seed(42, cell, trial)));
            }
        }
    }
}
