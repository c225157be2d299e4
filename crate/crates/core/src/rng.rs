//! Seeded, stream-splittable randomness.
//!
//! Every stochastic routine in the crate draws from a [`RandomSource`], a
//! ChaCha8 generator keyed by a 64-bit seed. The ChaCha stream counter is used
//! as the stream index, so `(seed, stream)` pairs never share keystream.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};

#[derive(Debug, Clone)]
pub struct RandomSource {
    inner: ChaCha8Rng,
}

/// Deterministic generator for `(seed, stream_index)`.
pub fn derive_stream(seed: u64, stream_index: u64) -> RandomSource {
    let mut inner = ChaCha8Rng::seed_from_u64(seed);
    inner.set_stream(stream_index);
    RandomSource { inner }
}

/// Packs a two-level index (e.g. grid point and trial) into one stream index.
pub fn stream_index(major: u32, minor: u32) -> u64 {
    (u64::from(major) << 32) | u64::from(minor)
}

impl RandomSource {
    /// Uniform real in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform integer in `[0, bound)`. Panics if `bound == 0`.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        self.inner.random_range(0..bound)
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Poisson draw; a non-positive mean yields 0.
    pub fn poisson(&mut self, mean: f64) -> u64 {
        if mean <= 0.0 {
            return 0;
        }
        let d = Poisson::new(mean).expect("finite positive Poisson mean");
        let x: f64 = d.sample(&mut self.inner);
        x as u64
    }

    pub fn binomial(&mut self, trials: u64, p: f64) -> u64 {
        if trials == 0 || p <= 0.0 {
            return 0;
        }
        if p >= 1.0 {
            return trials;
        }
        Binomial::new(trials, p)
            .expect("valid binomial parameters")
            .sample(&mut self.inner)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
