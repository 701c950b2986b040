//! The k-secretary problem on a random-order stream, reduced to quantile
//! estimation.
//!
//! Level `d` of the recursion owns the prefix `[1, n_d]` with `n_d = n >> d`
//! and quota `k_d = k >> d`. It accepts arrivals in `(n_{d+1}, n_d]` that
//! beat a threshold estimated on the second half of `[1, n_{d+1}]`, up to
//! `k_{d+1}` of them. The deepest level (`k_D = 1`) plays the classic
//! single-choice rule on `[1, n_D]`.
//!
//! Because each threshold is read from a disjoint interval, the whole game
//! runs in one forward pass with a single estimator alive at any time.

use std::f64::consts::E;
use std::fmt;
use std::io::Write;

use ordered_float::OrderedFloat;

use crate::approx::{estimate_quantile, ApproxConfig};
use crate::error::{Error, Result};
use crate::meter::MemoryMeter;
use crate::oracle;
use crate::random::RandomSource;
use crate::stream::{ElementSource, Extended, StreamInstance};
use crate::warmup::warmup_select;

/// Words held by the acceptance policy: read position, active threshold,
/// acceptance counter, level index, the single-choice rule's running maximum
/// and its accepted flag, plus the pending threshold and segment end.
pub const POLICY_WORDS: usize = 8;

/// A black-box estimator of the `k`-th largest among the next `n` elements.
pub trait QuantileEstimator<K> {
    /// Must read exactly `n` elements from `src`.
    fn estimate(
        &mut self,
        src: &mut dyn ElementSource<K>,
        n: usize,
        k: usize,
        rng: &mut RandomSource,
        meter: &mut MemoryMeter,
    ) -> Result<Extended<K>>;

    fn name(&self) -> &'static str;
}

/// Stores the whole segment and sorts it. Not metered.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleEstimator;

impl<K: Ord + Copy> QuantileEstimator<K> for OracleEstimator {
    fn estimate(
        &mut self,
        src: &mut dyn ElementSource<K>,
        n: usize,
        k: usize,
        _rng: &mut RandomSource,
        _meter: &mut MemoryMeter,
    ) -> Result<Extended<K>> {
        let values = (0..n).map(|_| src.next_element()).collect::<Result<Vec<K>>>()?;
        oracle::exact_kth(&values, k).map(Extended::Finite)
    }

    fn name(&self) -> &'static str {
        "oracle"
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WarmupEstimator {
    pub m: usize,
}

impl<K: Ord + Copy> QuantileEstimator<K> for WarmupEstimator {
    fn estimate(
        &mut self,
        src: &mut dyn ElementSource<K>,
        n: usize,
        k: usize,
        rng: &mut RandomSource,
        meter: &mut MemoryMeter,
    ) -> Result<Extended<K>> {
        warmup_select(src, n, k, self.m, rng, meter)
    }

    fn name(&self) -> &'static str {
        "warmup"
    }
}

/// The recursive estimator. With no configuration, each call picks the
/// default for its own target.
#[derive(Debug, Clone, Copy, Default)]
pub struct ApproxEstimator {
    pub config: Option<ApproxConfig>,
}

impl<K: Ord + Copy> QuantileEstimator<K> for ApproxEstimator {
    fn estimate(
        &mut self,
        src: &mut dyn ElementSource<K>,
        n: usize,
        k: usize,
        rng: &mut RandomSource,
        meter: &mut MemoryMeter,
    ) -> Result<Extended<K>> {
        let config = self.config.unwrap_or_else(|| ApproxConfig::for_target(k));
        estimate_quantile(src, n, k, &config, rng, meter)
    }

    fn name(&self) -> &'static str {
        "approx"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Acceptance<K> {
    /// 1-based arrival position.
    pub position: usize,
    pub value: K,
    pub level: usize,
}

/// Append-only record of accepted elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptanceLog<K> {
    pub budget: usize,
    accepted: Vec<Acceptance<K>>,
}

impl<K: Copy> AcceptanceLog<K> {
    pub fn new(budget: usize) -> Self {
        Self {
            budget,
            accepted: Vec::new(),
        }
    }

    fn accept(&mut self, position: usize, value: K, level: usize) {
        debug_assert!(self.accepted.len() < self.budget);
        debug_assert!(self.accepted.last().is_none_or(|a| a.position < position));
        self.accepted.push(Acceptance { position, value, level });
    }

    pub fn accepted(&self) -> &[Acceptance<K>] {
        &self.accepted
    }

    pub fn len(&self) -> usize {
        self.accepted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accepted.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = K> + '_ {
        self.accepted.iter().map(|a| a.value)
    }

    pub fn count_at_level(&self, level: usize) -> usize {
        self.accepted.iter().filter(|a| a.level == level).count()
    }
}

impl<K: fmt::Display + Copy> AcceptanceLog<K> {
    /// One `position value level` line per acceptance.
    pub fn write_lines<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for a in &self.accepted {
            writeln!(out, "{} {} {}", a.position, a.value, a.level)?;
        }
        Ok(())
    }
}

/// Per-level segment, quota and the interval its threshold estimator reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelSpec {
    pub level: usize,
    pub segment: usize,
    pub quota: usize,
    /// 1-based inclusive; `None` when the interval is empty.
    pub read: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPlan {
    pub levels: Vec<LevelSpec>,
}

impl LevelPlan {
    /// Levels `1..=floor(log2 k)`. The level with quota 1 finds a plain
    /// maximum over its whole segment; the others read its second half.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidTarget { k, n });
        }
        let depth = k.ilog2() as usize;
        let levels = (1..=depth)
            .map(|i| {
                let segment = n >> i;
                let quota = k >> i;
                let first = if quota == 1 { 1 } else { segment - segment / 2 + 1 };
                LevelSpec {
                    level: i,
                    segment,
                    quota,
                    read: (first <= segment).then_some((first, segment)),
                }
            })
            .collect();
        Ok(Self { levels })
    }

    pub fn is_disjoint(&self) -> bool {
        let mut spans: Vec<(usize, usize)> = self.levels.iter().filter_map(|l| l.read).collect();
        spans.sort_unstable();
        spans.windows(2).all(|w| w[0].1 < w[1].0)
    }
}

enum Rule<K> {
    /// Single-choice rule: watch `observe` arrivals, then take the first
    /// one above everything watched.
    Classic { observe: usize, best: Option<K>, done: bool },
    Threshold { threshold: Extended<K>, quota: usize, taken: usize },
}

/// Pass-through source that applies the acceptance rule to every element
/// pulled, whoever pulls it.
struct Tap<'a, K, S: ?Sized> {
    inner: &'a mut S,
    position: usize,
    level: usize,
    rule: Rule<K>,
    log: AcceptanceLog<K>,
    reads: Vec<(usize, usize, usize)>,
}

impl<K: Ord + Copy, S: ElementSource<K> + ?Sized> Tap<'_, K, S> {
    fn pull(&mut self) -> Result<K> {
        let x = self.inner.next_element()?;
        self.position += 1;
        match &mut self.rule {
            Rule::Classic { observe, best, done } => {
                if self.position <= *observe {
                    *best = Some(best.map_or(x, |b| b.max(x)));
                } else if !*done && best.is_none_or(|b| x > b) {
                    *done = true;
                    self.log.accept(self.position, x, self.level);
                }
            }
            Rule::Threshold { threshold, quota, taken } => {
                if *taken < *quota && Extended::Finite(x) > *threshold {
                    *taken += 1;
                    self.log.accept(self.position, x, self.level);
                }
            }
        }
        Ok(x)
    }
}

impl<K: Ord + Copy, S: ElementSource<K> + ?Sized> ElementSource<K> for Tap<'_, K, S> {
    fn next_element(&mut self) -> Result<K> {
        self.pull()
    }

    fn consumed(&self) -> usize {
        self.position
    }
}

/// Records the interval an estimator read.
struct Span<'t, 'a, K, S: ?Sized> {
    tap: &'t mut Tap<'a, K, S>,
    first: Option<usize>,
}

impl<K: Ord + Copy, S: ElementSource<K> + ?Sized> ElementSource<K> for Span<'_, '_, K, S> {
    fn next_element(&mut self) -> Result<K> {
        let x = self.tap.pull()?;
        self.first.get_or_insert(self.tap.position);
        Ok(x)
    }

    fn consumed(&self) -> usize {
        self.tap.position
    }
}

/// Outcome of one game.
#[derive(Debug, Clone)]
pub struct SecretaryRun<K> {
    pub log: AcceptanceLog<K>,
    /// `(level, first, last)` for every threshold estimate, 1-based.
    pub reads: Vec<(usize, usize, usize)>,
}

/// Plays the single-choice rule on the next `n` elements.
pub fn classic_secretary<K, S>(src: &mut S, n: usize) -> Result<AcceptanceLog<K>>
where
    K: Ord + Copy,
    S: ElementSource<K> + ?Sized,
{
    if n == 0 {
        return Err(Error::DomainError("the single-choice rule needs n >= 1".into()));
    }
    let mut tap = Tap {
        inner: src,
        position: 0,
        level: 0,
        rule: Rule::Classic {
            observe: observation_length(n),
            best: None,
            done: false,
        },
        log: AcceptanceLog::new(1),
        reads: Vec::new(),
    };
    for _ in 0..n {
        tap.pull()?;
    }
    Ok(tap.log)
}

fn observation_length(n: usize) -> usize {
    (n as f64 / E).floor() as usize
}

/// Estimates the `k`-th largest of the next `n` elements while reading only
/// the last `floor(n/2)` of them (all of them when `k = 1`).
pub fn second_half_estimate<K, S>(
    src: &mut S,
    n: usize,
    k: usize,
    estimator: &mut dyn QuantileEstimator<K>,
    rng: &mut RandomSource,
    meter: &mut MemoryMeter,
) -> Result<Extended<K>>
where
    K: Ord + Copy,
    S: ElementSource<K>,
{
    if k == 0 || k > n {
        return Err(Error::InvalidTarget { k, n });
    }
    if k == 1 {
        meter.acquire(1);
        let mut best = src.next_element()?;
        for _ in 1..n {
            best = best.max(src.next_element()?);
        }
        meter.release(1);
        return Ok(Extended::Finite(best));
    }
    let half = n / 2;
    src.skip(n - half)?;
    estimator.estimate(src, half, k / 2, rng, meter)
}

/// Plays the k-secretary game on the next `n` elements in one pass.
pub fn choose_top_k<K, S>(
    src: &mut S,
    n: usize,
    k: usize,
    estimator: &mut dyn QuantileEstimator<K>,
    rng: &mut RandomSource,
    meter: &mut MemoryMeter,
) -> Result<SecretaryRun<K>>
where
    K: Ord + Copy,
    S: ElementSource<K> + ?Sized,
{
    if k == 0 || k > n {
        return Err(Error::InvalidTarget { k, n });
    }
    let depth = k.ilog2() as usize;
    let seg = |d: usize| n >> d;
    let quota = |d: usize| k >> d;

    meter.acquire(POLICY_WORDS);
    let mut tap = Tap {
        inner: src,
        position: 0,
        level: depth,
        rule: Rule::Classic {
            observe: observation_length(seg(depth)),
            best: None,
            done: false,
        },
        log: AcceptanceLog::new(k),
        reads: Vec::new(),
    };

    // Innermost prefix: the single-choice rule, while the maximum of the
    // same prefix becomes the next level's threshold.
    let mut threshold = Extended::Bottom;
    if seg(depth) > 0 {
        let mut best = tap.pull()?;
        for _ in 1..seg(depth) {
            best = best.max(tap.pull()?);
        }
        threshold = Extended::Finite(best);
    }
    if depth > 0 {
        tap.reads.push((depth, 1, seg(depth)));
    }

    for level in (0..depth).rev() {
        tap.level = level;
        tap.rule = Rule::Threshold {
            threshold,
            quota: quota(level + 1),
            taken: 0,
        };
        let (start, end) = (seg(level + 1), seg(level));
        if level == 0 {
            for _ in start..end {
                tap.pull()?;
            }
            break;
        }
        // Threshold for the level above, from the second half of [1, end].
        let half = end / 2;
        for _ in start..end - half {
            tap.pull()?;
        }
        let mut level_rng = rng.derive(level as u64);
        let mut span = Span { tap: &mut tap, first: None };
        let next = estimator.estimate(&mut span, half, quota(level + 1), &mut level_rng, meter)?;
        let first = span.first;
        if let Some(first) = first {
            tap.reads.push((level, first, tap.position));
        }
        if tap.position != end {
            meter.release(POLICY_WORDS);
            return Err(Error::ContractViolation(format!(
                "estimator {} read to position {} instead of {end}",
                estimator.name(),
                tap.position
            )));
        }
        threshold = next;
    }
    meter.release(POLICY_WORDS);
    Ok(SecretaryRun {
        log: tap.log,
        reads: tap.reads,
    })
}

/// Non-negative weights for scoring a game.
pub trait Weight: Copy {
    fn weight(self) -> f64;
}

impl Weight for u64 {
    fn weight(self) -> f64 {
        self as f64
    }
}

impl Weight for i64 {
    fn weight(self) -> f64 {
        self as f64
    }
}

impl Weight for OrderedFloat<f64> {
    fn weight(self) -> f64 {
        self.0
    }
}

/// Accepted total over the sum of the `k` largest values.
pub fn competitive_ratio<K>(log: &AcceptanceLog<K>, instance: &StreamInstance<K>, k: usize) -> Result<f64>
where
    K: Weight + Ord + fmt::Debug,
{
    let weights: Vec<f64> = instance.values().iter().map(|v| v.weight()).collect();
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
        return Err(Error::DomainError(format!("weights must be non-negative, found {w}")));
    }
    let opt = oracle::opt_sum(&weights, k)?;
    let got: f64 = log.values().map(Weight::weight).sum();
    if opt == 0.0 {
        return Ok(1.0);
    }
    Ok(got / opt)
}
