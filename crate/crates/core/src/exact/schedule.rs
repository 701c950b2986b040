//! Stage boundaries and per-stage targets.
//!
//! With `L = floor(log2 k)`, stage `i` ends after `B_{i+1}` arrivals, where
//! `B_{L+1} = n` and `B_i ~ Binomial(B_{i+1}, 1/2)` is drawn from the last
//! stage backward. Stage `i` aims at rank `T_i = min(B_{i+1}, floor(k / 2^(L-i)))`.

use std::fmt;

use crate::error::{Error, Result};
use crate::random::{binomial, RandomSource};

/// `floor(log2 k)` for `k >= 1`.
pub fn stage_count(k: usize) -> usize {
    k.max(1).ilog2() as usize
}

/// Regenerates boundaries on demand from a single stored seed.
///
/// Holding the seed instead of the `O(log k)` boundaries keeps the exact
/// selector's bookkeeping constant-size. Each query replays the backward
/// draws, which costs `O(log k)` binomial samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleGenerator {
    seed: u64,
    n: usize,
    k: usize,
}

impl ScheduleGenerator {
    pub fn new(n: usize, k: usize, seed: u64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidTarget { k, n });
        }
        Ok(Self { seed, n, k })
    }

    /// Index of the last stage, `floor(log2 k)`.
    pub fn last_stage(&self) -> usize {
        stage_count(self.k)
    }

    /// `B_i` for `i` in `0..=L+1`.
    pub fn boundary(&self, i: usize) -> Result<usize> {
        let top = self.last_stage() + 1;
        if i > top {
            return Err(Error::IndexError(format!("boundary {i} of {top}")));
        }
        if i == 0 {
            return Ok(0);
        }
        let mut rng = RandomSource::new(self.seed);
        let mut b = self.n;
        for _ in (i..top).rev() {
            b = binomial(b, 0.5, &mut rng)?;
        }
        Ok(b)
    }

    /// `T_i` for `i` in `0..=L`.
    pub fn target(&self, i: usize) -> Result<usize> {
        let last = self.last_stage();
        if i > last {
            return Err(Error::IndexError(format!("stage {i} of {last}")));
        }
        Ok(self.boundary(i + 1)?.min(self.k >> (last - i)))
    }

    /// First stage whose target exceeds `m/2`, if any.
    pub fn start_stage(&self, m: usize) -> Result<Option<usize>> {
        for i in 0..=self.last_stage() {
            if 2 * self.target(i)? > m {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageSchedule {
    /// `B_0 ..= B_{L+1}`.
    pub boundaries: Vec<usize>,
    /// `T_0 ..= T_L`.
    pub targets: Vec<usize>,
    /// First stage with `T_i > m/2`.
    pub start: Option<usize>,
}

impl StageSchedule {
    pub fn last_stage(&self) -> usize {
        self.targets.len() - 1
    }
}

impl fmt::Display for StageSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "boundaries={:?} targets={:?} start=", self.boundaries, self.targets)?;
        match self.start {
            Some(i) => write!(f, "{i}"),
            None => f.write_str("none"),
        }
    }
}

/// Materializes the schedule. Draws one seed from `rng`; the selector,
/// given an rng in the same state, sees the same boundaries.
pub fn build_schedule(n: usize, k: usize, m: usize, rng: &mut RandomSource) -> Result<StageSchedule> {
    let generator = ScheduleGenerator::new(n, k, rng.next_u64())?;
    materialize(&generator, m)
}

pub(crate) fn materialize(generator: &ScheduleGenerator, m: usize) -> Result<StageSchedule> {
    let last = generator.last_stage();
    let boundaries = (0..=last + 1).map(|i| generator.boundary(i)).collect::<Result<Vec<_>>>()?;
    let targets = (0..=last).map(|i| generator.target(i)).collect::<Result<Vec<_>>>()?;
    let start = generator.start_stage(m)?;
    Ok(StageSchedule { boundaries, targets, start })
}
