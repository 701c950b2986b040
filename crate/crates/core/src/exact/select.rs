use std::fmt;

use crate::buffer::TopBuffer;
use crate::error::{Error, Result};
use crate::meter::MemoryMeter;
use crate::random::RandomSource;
use crate::stream::ElementSource;

use super::schedule::{stage_count, ScheduleGenerator};
use super::window::{Census, Slot, Window};

/// Bookkeeping words besides the window: schedule seed, `n`, `k`, stage
/// index, read position, stage end, stage target and tracked rank.
pub const EXACT_COUNTER_WORDS: usize = 8;

/// What one stage did, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: usize,
    /// Arrivals read once the stage is over (`B_{i+1}`).
    pub end: usize,
    pub target: usize,
    /// Tracked center rank before the stage's closing move.
    pub rank_before: usize,
    pub shift: isize,
    pub census: Census,
}

impl fmt::Display for StageRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage={} end={} target={} rank_before={} rank_after={} shift={} {}",
            self.stage, self.end, self.target, self.rank_before, self.target, self.shift, self.census
        )
    }
}

/// Rounds `m` up to even and rejects `m < 4`.
pub fn normalize_block(m: usize) -> Result<usize> {
    if m < 4 {
        return Err(Error::InvalidConfig(format!("block size m = {m} must be at least 4")));
    }
    if m % 2 == 1 {
        log::warn!("block size m = {m} is odd, using {}", m + 1);
        return Ok(m + 1);
    }
    Ok(m)
}

/// Exact `k`-th largest of the next `n` elements, using a window of `3m`
/// keys plus a constant number of counters.
///
/// Fails with `SelectionFailure` when the center slot does not hold a key at
/// the end; the returned key is otherwise exact with high probability.
pub fn exact_select<K, S>(
    src: &mut S,
    n: usize,
    k: usize,
    m: usize,
    rng: &mut RandomSource,
    meter: &mut MemoryMeter,
) -> Result<K>
where
    K: Ord + Copy,
    S: ElementSource<K> + ?Sized,
{
    run(src, n, k, m, rng, meter, &mut |_| {}, &mut |_, _| {})
}

/// [`exact_select`] that also returns one record per executed stage. The
/// selection result is returned rather than propagated so failed runs can be
/// inspected.
pub fn exact_select_traced<K, S>(
    src: &mut S,
    n: usize,
    k: usize,
    m: usize,
    rng: &mut RandomSource,
    meter: &mut MemoryMeter,
) -> (Result<K>, Vec<StageRecord>)
where
    K: Ord + Copy,
    S: ElementSource<K> + ?Sized,
{
    let mut records = Vec::new();
    let out = run(src, n, k, m, rng, meter, &mut |r| records.push(r), &mut |_, _| {});
    (out, records)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn run<K, S>(
    src: &mut S,
    n: usize,
    k: usize,
    m: usize,
    rng: &mut RandomSource,
    meter: &mut MemoryMeter,
    on_stage: &mut dyn FnMut(StageRecord),
    on_arrival: &mut dyn FnMut(&Window<K>, usize),
) -> Result<K>
where
    K: Ord + Copy,
    S: ElementSource<K> + ?Sized,
{
    let m = normalize_block(m)?;
    let schedule = ScheduleGenerator::new(n, k, rng.next_u64())?;
    let words = 3 * m + EXACT_COUNTER_WORDS;
    meter.acquire(words);
    let out = run_stages(src, &schedule, m, on_stage, on_arrival);
    meter.release(words);
    out
}

fn run_stages<K, S>(
    src: &mut S,
    schedule: &ScheduleGenerator,
    m: usize,
    on_stage: &mut dyn FnMut(StageRecord),
    on_arrival: &mut dyn FnMut(&Window<K>, usize),
) -> Result<K>
where
    K: Ord + Copy,
    S: ElementSource<K> + ?Sized,
{
    let Some(start) = schedule.start_stage(m)? else {
        // k <= m/2: the whole answer fits in the window's storage.
        let n = schedule.boundary(schedule.last_stage() + 1)?;
        let k = schedule.target(schedule.last_stage())?;
        let mut top = TopBuffer::new(k);
        for _ in 0..n {
            top.offer(src.next_element()?);
        }
        return top.nth(k).ok_or(Error::SelectionFailure("-inf"));
    };

    let mut window = Window::new(3 * m)?;
    let center = window.center_index();

    let first = schedule.boundary(start + 1)?;
    let mut top = TopBuffer::new(3 * m - 1);
    for _ in 0..first {
        top.offer(src.next_element()?);
    }
    window.fill_from_second(top.as_slice());
    drop(top);

    let target = schedule.target(start)?;
    let base_rank = center - 1;
    let shift = base_rank as isize - target as isize;
    window.shift(shift);
    on_stage(StageRecord {
        stage: start,
        end: first,
        target,
        rank_before: base_rank,
        shift,
        census: window.census(),
    });
    let mut rank = target;

    for stage in start + 1..=schedule.last_stage() {
        let begin = schedule.boundary(stage)?;
        let end = schedule.boundary(stage + 1)?;
        for _ in begin..end {
            let x = src.next_element()?;
            if window.center().exceeded_by(x) {
                rank += 1;
            }
            window.insert(x);
            on_arrival(&window, rank);
        }
        let target = schedule.target(stage)?;
        let shift = rank as isize - target as isize;
        window.shift(shift);
        on_stage(StageRecord {
            stage,
            end,
            target,
            rank_before: rank,
            shift,
            census: window.census(),
        });
        rank = target;
    }

    match window.center() {
        Slot::Key(x) => Ok(x),
        Slot::Top => Err(Error::SelectionFailure("+inf")),
        Slot::Bottom => Err(Error::SelectionFailure("-inf")),
        Slot::Empty => Err(Error::SelectionFailure("empty")),
    }
}

/// Lower bound on the success probability of [`exact_select`]:
/// `1 - 12 L e^(-m/12) - 2 sum_{i<L} e^(-m^2 / (32 k / 2^i))` with
/// `L = floor(log2 k)`. May be negative.
pub fn theorem2_bound(k: usize, m: usize) -> f64 {
    let last = stage_count(k);
    let m = m as f64;
    let tail: f64 = (0..last)
        .map(|i| (-m * m / (32.0 * k as f64 / 2f64.powi(i as i32))).exp())
        .sum();
    1.0 - 12.0 * last as f64 * (-m / 12.0).exp() - 2.0 * tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::stream::{make_instance, StreamInstance};

    fn select(inst: &StreamInstance<u64>, k: usize, m: usize, seed: u64) -> (Result<u64>, MemoryMeter) {
        let mut meter = MemoryMeter::new();
        let mut rng = RandomSource::new(seed);
        let mut cursor = inst.cursor();
        let out = exact_select(&mut cursor, inst.len(), k, m, &mut rng, &mut meter);
        if out.is_ok() {
            assert_eq!(cursor.consumed(), inst.len());
        }
        (out, meter)
    }

    #[test]
    fn k1_is_the_maximum() {
        for seed in 0..50 {
            let inst = make_instance((0..64u64).map(|v| v * 3 + 1).collect(), seed).unwrap();
            assert_eq!(select(&inst, 1, 4, seed).0.unwrap(), 190);
        }
    }

    #[test]
    fn small_k_fallback_is_exact() {
        let values: Vec<u64> = (0..500).collect();
        for seed in 0..20 {
            let inst = make_instance(values.clone(), seed).unwrap();
            for k in [1, 2, 3, 4] {
                assert_eq!(select(&inst, k, 8, seed).0.unwrap(), 500 - k as u64);
            }
        }
    }

    #[test]
    fn block_size_rules() {
        assert!(normalize_block(3).is_err());
        assert_eq!(normalize_block(5).unwrap(), 6);
        assert_eq!(normalize_block(8).unwrap(), 8);
        let inst = make_instance((0..100u64).collect(), 1).unwrap();
        assert!(matches!(select(&inst, 10, 2, 0).0, Err(Error::InvalidConfig(_))));
        assert!(matches!(select(&inst, 0, 8, 0).0, Err(Error::InvalidTarget { .. })));
    }

    #[test]
    fn success_rate_k256() {
        let values: Vec<u64> = (0..20_000).collect();
        let want = oracle::exact_kth(&values, 256).unwrap();
        let trials = 500;
        let hits = (0..trials)
            .filter(|&seed| {
                let inst = make_instance(values.clone(), seed).unwrap();
                select(&inst, 256, 64, seed ^ 0x5555).0 == Ok(want)
            })
            .count();
        assert!(hits as f64 / trials as f64 >= 0.85, "{hits}/{trials}");
    }

    #[test]
    fn memory_is_window_plus_counters() {
        let inst = make_instance((0..5000u64).collect(), 4).unwrap();
        let (_, meter) = select(&inst, 400, 40, 9);
        assert_eq!(meter.peak(), 3 * 40 + EXACT_COUNTER_WORDS);
        assert_eq!(meter.current(), 0);
    }

    #[test]
    fn tracked_rank_matches_prefix_rank() {
        let mut rng = RandomSource::new(31);
        let mut checked = 0;
        for _ in 0..200 {
            let n = 20 + rng.index(180);
            let k = 1 + rng.index(n);
            let inst = make_instance((0..n as u64).collect(), rng.next_u64()).unwrap();
            let seq: Vec<u64> = inst.stream().collect();
            let mut seen = 0usize;
            let mut cursor = inst.cursor();
            let mut meter = MemoryMeter::new();
            let first_stage = std::cell::Cell::new(None);
            let _ = run(
                &mut cursor,
                n,
                k,
                4,
                &mut rng,
                &mut meter,
                &mut |r| {
                    if first_stage.get().is_none() {
                        first_stage.set(Some(r.end));
                    }
                },
                &mut |w: &Window<u64>, rank| {
                    seen += 1;
                    if let Slot::Key(c) = w.center() {
                        let prefix = first_stage.get().unwrap() + seen;
                        let truth = seq[..prefix].iter().filter(|&&x| x >= c).count();
                        assert_eq!(rank, truth);
                        checked += 1;
                    }
                },
            );
        }
        assert!(checked > 1000);
    }

    #[test]
    fn trace_lines() {
        let inst = make_instance((0..2000u64).collect(), 2).unwrap();
        let mut meter = MemoryMeter::new();
        let (out, records) = exact_select_traced(&mut inst.cursor(), 2000, 100, 16, &mut RandomSource::new(5), &mut meter);
        assert!(out.is_ok());
        assert_eq!(records.last().unwrap().stage, 6);
        assert_eq!(records.last().unwrap().target, 100);
        assert_eq!(records.last().unwrap().end, 2000);
        let line = records[0].to_string();
        assert!(line.starts_with("stage="), "{line}");
        assert!(line.contains("census") || line.contains("top="));
    }

    #[test]
    fn bound_examples() {
        let m = 40usize;
        let direct = 1.0 - 12.0 * (-(m as f64) / 12.0).exp() - 2.0 * (-((m * m) as f64) / 64.0).exp();
        assert!((theorem2_bound(2, m) - direct).abs() < 1e-15);
        assert!((theorem2_bound(1000, 100_000) - 1.0).abs() < 1e-12);
        assert!(theorem2_bound(256, 64) < 0.0);
    }
}
