//! Counter-based random streams for deterministic parallel sampling.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Samples per stream in batched Monte Carlo; fixed so results do not
/// depend on the thread count.
pub const BATCH: usize = 1 << 14;

/// The generator for one batch: same seed, stream selected by batch index.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A uniform draw from the open interval (0, 1).
pub fn open01(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// A uniform draw from `[lo, hi)`.
pub fn uniform(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * ((rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
}

/// A uniform index in `0..n`.
pub fn index(rng: &mut impl RngCore, n: usize) -> usize {
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

/// Split `samples` into `(batch index, batch size)` pairs.
pub fn batches(samples: usize) -> Vec<(u64, usize)> {
    (0..samples.div_ceil(BATCH))
        .map(|b| (b as u64, BATCH.min(samples - b * BATCH)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream(7, 3).next_u64()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        assert_ne!(stream(7, 3).next_u64(), stream(7, 4).next_u64());
    }

    #[test]
    fn open_interval() {
        let mut r = stream(1, 0);
        for _ in 0..10_000 {
            let u = open01(&mut r);
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn batches_cover_samples() {
        let b = batches(BATCH * 2 + 5);
        assert_eq!(b.len(), 3);
        assert_eq!(b.iter().map(|x| x.1).sum::<usize>(), BATCH * 2 + 5);
    }
}
