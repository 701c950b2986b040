//! Approximate k-th largest selection in `O(log k)` words.
//!
//! Each level of the estimator splits its segment at `B ~ Binomial(n, 1/2)`,
//! subsamples the first half at rate `2m/3k`, and uses the ranks of the
//! subsampled top-`m` to pick a threshold `a'` whose rank in the first half
//! sits just below `k/2`. The remaining suffix is then searched for the
//! `k'`-th largest element below `a'`, where `k' <= C0 * k`. Because `k`
//! shrinks geometrically the error stays `O(sqrt k)`, independent of `n`.
//!
//! The recursion is unrolled into a loop. While a deeper level runs, every
//! enclosing level keeps a five-word frame: its threshold, target, length,
//! smallest element seen and count below its threshold. Only one
//! [`ThresholdTable`] is alive at a time.

use crate::buffer::TopBuffer;
use crate::error::{Error, Result};
use crate::meter::MemoryMeter;
use crate::random::{binomial, RandomSource};
use crate::stream::{ElementSource, Extended};

/// Default threshold-window fraction.
pub const DEFAULT_C0: f64 = 0.05;

/// Words held by one recursion frame.
const FRAME_WORDS: usize = 5;
/// Counters live while a level builds its table: `B`, `B1`, `B'`, position.
const TABLE_COUNTER_WORDS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxConfig {
    /// Length of the subsample array, in elements.
    pub m: usize,
    /// Window fraction: thresholds are sought within `floor(c0 * k)` ranks
    /// below `k/2`. Must lie in `(0, 1/2)`.
    pub c0: f64,
}

impl ApproxConfig {
    pub fn new(m: usize, c0: f64) -> Result<Self> {
        let cfg = Self { m, c0 };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `m = max(16, ceil(8 log2(k + 2)))` and `c0 = 0.05`.
    ///
    /// Neither constant is pinned down by the analysis beyond "m = Omega(log k)"
    /// and "c0 sufficiently small"; these are engineering defaults.
    pub fn for_target(k: usize) -> Self {
        let m = (8.0 * ((k + 2) as f64).log2()).ceil() as usize;
        Self {
            m: m.max(16),
            c0: DEFAULT_C0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidConfig("m must be at least 1".into()));
        }
        if !(self.c0 > 0.0 && self.c0 < 0.5) {
            return Err(Error::InvalidConfig(format!("c0 = {} not in (0, 1/2)", self.c0)));
        }
        Ok(())
    }

    /// Threshold window width `max(1, floor(c0 * k))`.
    pub fn window(&self, k: usize) -> usize {
        ((self.c0 * k as f64).floor() as usize).max(1)
    }
}

/// Up to `m` elements below the active threshold, each with its rank among
/// the first half of the segment (ranks counted below the threshold).
///
/// Elements are strictly decreasing and ranks strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdTable<K> {
    entries: Vec<(K, usize)>,
}

impl<K: Ord + Copy> ThresholdTable<K> {
    /// Builds a table from `(element, rank)` pairs, checking the ordering.
    pub fn from_entries(entries: Vec<(K, usize)>) -> Result<Self> {
        let ordered = entries.windows(2).all(|w| w[0].0 > w[1].0 && w[0].1 < w[1].1);
        if !ordered || entries.first().is_some_and(|e| e.1 == 0) {
            return Err(Error::DomainError(
                "table needs decreasing elements with increasing positive ranks".into(),
            ));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(K, usize)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn largest(&self) -> Option<K> {
        self.entries.first().map(|e| e.0)
    }
}

/// Largest table element whose rank lies in `[k/2 - delta, k/2 - 1]`,
/// returned with its rank.
pub fn select_threshold<K: Ord + Copy>(table: &ThresholdTable<K>, k: usize, delta: usize) -> Option<(K, usize)> {
    let half = k / 2;
    if half == 0 {
        return None;
    }
    let lo = half.saturating_sub(delta);
    let hi = half - 1;
    // Ranks increase down the table, so the first in-window entry is the
    // largest element.
    let at = table.entries.partition_point(|e| e.1 < lo);
    table.entries.get(at).filter(|e| e.1 <= hi).copied()
}

/// Accumulates the table for one level: first the top-`m` of the
/// subsampled prefix, then one counter per entry for the arrivals that land
/// between it and its upper neighbour.
struct TableBuilder<K> {
    keys: TopBuffer<K>,
    gaps: Vec<usize>,
}

impl<K: Ord + Copy> TableBuilder<K> {
    fn new(m: usize) -> Self {
        Self {
            keys: TopBuffer::new(m),
            gaps: Vec::new(),
        }
    }

    fn sample(&mut self, x: K) {
        self.keys.offer(x);
    }

    fn start_counting(&mut self) {
        self.gaps = vec![0; self.keys.len()];
    }

    /// `x` lies between `keys[i-1]` and `keys[i]` and raises the rank of
    /// every key from `i` on.
    fn count(&mut self, x: K) {
        let i = self.keys.as_slice().partition_point(|&key| key > x);
        if let Some(g) = self.gaps.get_mut(i) {
            *g += 1;
        }
    }

    fn finish(self) -> ThresholdTable<K> {
        let mut above = 0;
        let entries = self
            .keys
            .as_slice()
            .iter()
            .zip(&self.gaps)
            .enumerate()
            .map(|(i, (&key, &gap))| {
                above += gap;
                (key, i + 1 + above)
            })
            .collect();
        ThresholdTable { entries }
    }
}

#[derive(Debug, Clone, Copy)]
struct Frame<K> {
    threshold: Extended<K>,
    target: usize,
    smallest: Option<K>,
    below: usize,
}

/// Reads one element and folds it into every open frame.
fn pull<K, S>(src: &mut S, frames: &mut [Frame<K>]) -> Result<K>
where
    K: Ord + Copy,
    S: ElementSource<K> + ?Sized,
{
    let x = src.next_element()?;
    for f in frames.iter_mut() {
        f.smallest = Some(f.smallest.map_or(x, |s| s.min(x)));
        if Extended::Finite(x) < f.threshold {
            f.below += 1;
        }
    }
    Ok(x)
}

/// Estimates the `k`-th largest of the next `n` elements.
pub fn estimate_quantile<K, S>(
    src: &mut S,
    n: usize,
    k: usize,
    config: &ApproxConfig,
    rng: &mut RandomSource,
    meter: &mut MemoryMeter,
) -> Result<Extended<K>>
where
    K: Ord + Copy,
    S: ElementSource<K> + ?Sized,
{
    if k == 0 || k > n {
        return Err(Error::InvalidTarget { k, n });
    }
    find_kth(src, n, config, k, Extended::Top, rng, meter)
}

/// Approximately the `k`-th largest among the next `n` elements that lie
/// strictly below `threshold`, or `Bottom` when fewer than `k` do.
///
/// Reads exactly `n` elements. When at least `k` elements lie below the
/// threshold the answer is a real stream element below it.
pub fn find_kth<K, S>(
    src: &mut S,
    n: usize,
    config: &ApproxConfig,
    k: usize,
    threshold: Extended<K>,
    rng: &mut RandomSource,
    meter: &mut MemoryMeter,
) -> Result<Extended<K>>
where
    K: Ord + Copy,
    S: ElementSource<K> + ?Sized,
{
    config.validate()?;
    if k == 0 {
        return Err(Error::InvalidTarget { k, n });
    }
    let m = config.m;

    let mut frames: Vec<Frame<K>> = Vec::new();
    let (mut len, mut target, mut cap) = (n, k, threshold);

    let innermost = loop {
        frames.push(Frame {
            threshold: cap,
            target,
            smallest: None,
            below: 0,
        });
        meter.acquire(FRAME_WORDS);

        if target <= m {
            let words = target + 1;
            meter.acquire(words);
            let mut top = TopBuffer::new(target);
            for _ in 0..len {
                let x = pull(src, &mut frames)?;
                if Extended::Finite(x) < cap {
                    top.offer(x);
                }
            }
            meter.release(words);
            let me = frames.last().expect("frame pushed above");
            break if me.below < target {
                Extended::Bottom
            } else {
                top.nth(target).map_or(Extended::Bottom, Extended::Finite)
            };
        }

        let table_words = 2 * m + TABLE_COUNTER_WORDS;
        meter.acquire(table_words);
        let half_len = binomial(len, 0.5, rng)?;
        let sampled = binomial(half_len, 2.0 * m as f64 / (3.0 * target as f64), rng)?;

        let mut builder = TableBuilder::new(m);
        for _ in 0..sampled {
            let x = pull(src, &mut frames)?;
            if Extended::Finite(x) < cap {
                builder.sample(x);
            }
        }
        builder.start_counting();
        for _ in sampled..half_len {
            let x = pull(src, &mut frames)?;
            if Extended::Finite(x) < cap {
                builder.count(x);
            }
        }
        let table = builder.finish();
        let below_in_half = frames.last().map_or(0, |f| f.below);
        let rest = len - half_len;

        let pick = if below_in_half < target / 2 {
            None
        } else {
            select_threshold(&table, target, config.window(target))
        };

        let Some((next_cap, cap_rank)) = pick else {
            // Either the first half is too thin, or no in-window element was
            // retained. Finish the segment and fall back.
            let fallback = if below_in_half < target / 2 {
                None
            } else {
                table.largest()
            };
            for _ in 0..rest {
                pull(src, &mut frames)?;
            }
            meter.release(table_words);
            let me = frames.last().expect("frame pushed above");
            break if me.below < target {
                Extended::Bottom
            } else {
                Extended::Finite(fallback.or(me.smallest).expect("below >= target >= 1"))
            };
        };

        meter.release(table_words);
        len = rest;
        target = target / 2 - cap_rank;
        cap = Extended::Finite(next_cap);
    };

    // Unwind: the innermost frame produced `innermost`; each enclosing level
    // maps an out-of-range result to Bottom and a Bottom child to its own
    // smallest element.
    frames.pop();
    meter.release(FRAME_WORDS);
    let mut result = innermost;
    while let Some(f) = frames.pop() {
        meter.release(FRAME_WORDS);
        result = if f.below < f.target {
            Extended::Bottom
        } else if result.is_bottom() {
            Extended::Finite(f.smallest.expect("below >= target >= 1"))
        } else {
            result
        };
    }
    Ok(result)
}
