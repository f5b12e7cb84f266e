//! Seeded, platform-independent random number generation.
//!
//! The generator is ChaCha with 8 rounds. A seed is expanded into the
//! 256-bit key with `rand_core`'s `seed_from_u64` (PCG32 expansion) and the
//! 64-bit stream id selects an independent keystream, so one base seed can
//! be split into any number of non-overlapping trial streams.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Stream `stream` of generator `seed`. Distinct streams never overlap.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw from `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = SeededRng::with_stream(42, 3);
        let mut b = SeededRng::with_stream(42, 3);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = SeededRng::with_stream(42, 0);
        let mut b = SeededRng::with_stream(42, 1);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn unit_interval() {
        let mut rng = SeededRng::new(1);
        for _ in 0..10_000 {
            let u = rng.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    // Pins the algorithm: a change of generator or seeding breaks recorded runs.
    #[test]
    fn first_draws_are_stable() {
        let mut rng = SeededRng::new(0);
        let first = rng.next_u64();
        let mut again = SeededRng::new(0);
        assert_eq!(first, again.next_u64());
        assert_ne!(first, SeededRng::new(1).next_u64());
        // Pinned so any change to the generator or its seeding shows up here.
        assert_eq!(first, 13080132717333068652);
        assert_eq!(again.next_u64(), 8594738769458413623);
        assert_eq!(SeededRng::new(0).next_f64(), 0.7090754154265618);
    }
}
