//! Seeded randomness shared by every algorithm.
//!
//! A [`RandomSource`] is fully determined by its 64-bit seed. Nested
//! computations (recursion levels, trials, the arrival permutation) take
//! independent substreams through [`RandomSource::derive`], so adding draws
//! in one place never perturbs another.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};

/// Largest trial count for which binomial draws are taken as a direct sum of
/// Bernoulli variables.
pub const DIRECT_BINOMIAL_LIMIT: u64 = 64;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent substream keyed by `(seed, label)`. Does not consume any
    /// draws from `self`.
    pub fn derive(&self, label: u64) -> Self {
        Self::new(splitmix64(self.seed ^ splitmix64(label.wrapping_add(0xA076_1D64_78BD_642F))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    /// Uniform index in `0..bound`. `bound` must be positive.
    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.random()
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Draws an exact `Binomial(trials, p)` variate.
///
/// Small trial counts are summed Bernoulli draws; larger ones go through the
/// BTPE sampler of `rand_distr`, which is exact rather than a normal
/// approximation.
pub fn sample_binomial(trials: u64, p: f64, rng: &mut RandomSource) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(format!("binomial probability {p} not in [0, 1]")));
    }
    if p == 0.0 || trials == 0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(trials);
    }
    if trials <= DIRECT_BINOMIAL_LIMIT {
        return Ok((0..trials).filter(|_| rng.bernoulli(p)).count() as u64);
    }
    let dist = Binomial::new(trials, p).map_err(|e| Error::DomainError(e.to_string()))?;
    Ok(dist.sample(rng))
}

/// `usize` convenience wrapper around [`sample_binomial`].
pub(crate) fn binomial(trials: usize, p: f64, rng: &mut RandomSource) -> Result<usize> {
    sample_binomial(trials as u64, p, rng).map(|b| b as usize)
}
