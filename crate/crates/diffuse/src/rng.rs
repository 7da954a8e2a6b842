//! Seeded, reproducible random number generation.
//!
//! All stochastic code draws from [`SimRng`], a ChaCha8 stream (counter-based,
//! so a seed fully determines the stream independent of platform or thread
//! scheduling). Ensembles never share generator state: replica `r` of a run
//! with base seed `b` uses `derive_seed(b, r)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The simulation generator. One instance per run; never shared.
pub type SimRng = ChaCha8Rng;

/// SplitMix64 finalizer; used only for seed derivation.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Replica seed derivation, fixed for all time:
/// `splitmix64(splitmix64(base) ^ splitmix64(replica + 0x2545F4914F6CDD1D))`.
///
/// The mixing keeps nearby base seeds and replica indices decorrelated, and
/// `derive_seed(b, r)` never collides with plain `b` usage in practice.
pub fn derive_seed(base: u64, replica: u64) -> u64 {
    splitmix64(splitmix64(base) ^ splitmix64(replica.wrapping_add(0x2545_F491_4F6C_DD1D)))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// One Exponential(`rate`) holding time; consumes exactly one uniform draw.
#[inline]
pub fn exp_time(rng: &mut SimRng, rate: f64) -> f64 {
    debug_assert!(rate > 0.0, "exponential rate must be positive");
    let u: f64 = rng.gen();
    // -ln(1 - u); ln_1p keeps precision for small u.
    -(-u).ln_1p() / rate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_frozen() {
        // Frozen values: changing the derivation silently would break every
        // recorded ensemble, so these are pinned.
        assert_eq!(splitmix64(0), 0xE220A8397B1DCDAF);
        assert_eq!(splitmix64(1), 0x910A2DEC89025CC1);
        let s = derive_seed(42, 0);
        assert_eq!(s, 0xA364E7A6BA57D4A6);
        assert_ne!(s, derive_seed(42, 1));
        assert_ne!(s, derive_seed(43, 0));
    }

    #[test]
    fn replica_seeds_unique_in_small_ranges() {
        let mut seen = std::collections::HashSet::new();
        for base in [0u64, 1, 42, u64::MAX] {
            for r in 0..1000 {
                assert!(seen.insert(derive_seed(base, r)));
            }
        }
    }

    #[test]
    fn exp_time_mean() {
        let mut rng = rng_from_seed(7);
        let n = 200_000;
        let mean: f64 = (0..n).map(|_| exp_time(&mut rng, 2.0)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }
}
