//! Baseline estimator: subsample at rate `m/k`, keep the top `m`.
//!
//! Its expected rank error is of order `k/sqrt(m)`, which makes it the
//! reference point the recursive estimator in [`crate::approx`] improves on.

use crate::buffer::TopBuffer;
use crate::error::{Error, Result};
use crate::meter::MemoryMeter;
use crate::random::{binomial, RandomSource};
use crate::stream::{ElementSource, Extended};

/// Reads `n` elements and returns the subsample estimate of the `k`-th
/// largest, or the exact answer when `m >= k`.
///
/// Subsampling is realized as "the first `B ~ Binomial(n, m/k)` arrivals",
/// which has the law of independent rate-`m/k` sampling on a random-order
/// stream. With fewer than `m` sampled elements the smallest sampled one is
/// returned, and `Bottom` if nothing was sampled.
pub fn warmup_select<K, S>(
    src: &mut S,
    n: usize,
    k: usize,
    m: usize,
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
    if m == 0 {
        return Err(Error::InvalidConfig("memory budget m must be positive".into()));
    }

    if m >= k {
        // buffer of k keys, plus read position and stored count
        let words = k + 2;
        meter.acquire(words);
        let mut top = TopBuffer::new(k);
        for _ in 0..n {
            top.offer(src.next_element()?);
        }
        meter.release(words);
        return Ok(top.nth(k).map_or(Extended::Bottom, Extended::Finite));
    }

    // buffer of m keys, plus B, read position and stored count
    let words = m + 3;
    meter.acquire(words);
    let prefix = binomial(n, m as f64 / k as f64, rng)?;
    let mut top = TopBuffer::new(m);
    for _ in 0..prefix {
        top.offer(src.next_element()?);
    }
    src.skip(n - prefix)?;
    meter.release(words);

    let pick = top.nth(m).or_else(|| top.last());
    Ok(pick.map_or(Extended::Bottom, Extended::Finite))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::stream::{make_instance, IterSource, StreamInstance};

    fn run(values: Vec<u64>, seed: u64, k: usize, m: usize) -> (Extended<u64>, MemoryMeter) {
        let inst = make_instance(values, seed).unwrap();
        let mut meter = MemoryMeter::new();
        let mut rng = RandomSource::new(seed ^ 0xFF);
        let out = warmup_select(&mut inst.cursor(), inst.len(), k, m, &mut rng, &mut meter).unwrap();
        (out, meter)
    }

    #[test]
    fn exact_branch() {
        let (x, _) = run(vec![9, 7, 5, 3, 1], 3, 3, 5);
        assert_eq!(x, Extended::Finite(5));
        let (x, meter) = run(vec![42], 0, 1, 1);
        assert_eq!(x, Extended::Finite(42));
        assert!(meter.peak() <= 4);
        assert_eq!(meter.current(), 0);
    }

    #[test]
    fn rejects_bad_target() {
        let mut meter = MemoryMeter::new();
        let mut rng = RandomSource::new(0);
        let mut src = IterSource::new(vec![1u64, 2]);
        let e = warmup_select(&mut src, 2, 3, 1, &mut rng, &mut meter);
        assert!(matches!(e, Err(Error::InvalidTarget { k: 3, n: 2 })));
    }

    #[test]
    fn consumes_exactly_n() {
        let inst = make_instance((0..1000u64).collect(), 1).unwrap();
        let mut cursor = inst.cursor();
        let mut meter = MemoryMeter::new();
        let mut rng = RandomSource::new(2);
        warmup_select(&mut cursor, 1000, 100, 4, &mut rng, &mut meter).unwrap();
        assert_eq!(cursor.consumed(), 1000);
    }

    #[test]
    fn meter_counts_buffer_and_counters() {
        let (_, meter) = run((0..500).collect(), 11, 50, 8);
        assert_eq!(meter.peak(), 8 + 3);
    }

    #[test]
    fn empty_subsample_gives_bottom() {
        // k = n = 1000, m = 1: prefix length ~ Bin(1000, 1/1000) is zero for
        // roughly a third of the seeds.
        let values: Vec<u64> = (0..1000).collect();
        let saw_bottom = (0..40).any(|seed| run(values.clone(), seed, 1000, 1).0.is_bottom());
        assert!(saw_bottom);
    }

    #[test]
    fn same_seed_same_answer() {
        let values: Vec<u64> = (0..3000).map(|i| i * 7).collect();
        assert_eq!(run(values.clone(), 5, 300, 10).0, run(values, 5, 300, 10).0);
    }

    fn mean_error(n: usize, k: usize, m: usize, trials: u64) -> f64 {
        let values: Vec<u64> = (0..n as u64).collect();
        let total: usize = (0..trials)
            .map(|seed| {
                let inst = make_instance(values.clone(), seed).unwrap();
                let mut meter = MemoryMeter::new();
                let mut rng = RandomSource::new(seed).derive(1);
                let x = warmup_select(&mut inst.cursor(), n, k, m, &mut rng, &mut meter)
                    .unwrap()
                    .finite()
                    .unwrap_or(0);
                let rank = oracle::true_rank(inst.values(), x, Extended::Top).unwrap();
                rank.abs_diff(k)
            })
            .sum();
        total as f64 / trials as f64
    }

    #[test]
    fn single_word_error_is_order_k() {
        // Geometric(1/k) rank: E|X - k| is about 2k/e ~ 0.74k.
        let err = mean_error(10_000, 1000, 1, 2000);
        assert!((500.0..=1500.0).contains(&err), "mean error {err}");
    }

    #[test]
    fn error_grows_with_k() {
        let small = mean_error(20_000, 1000, 16, 1000);
        let large = mean_error(20_000, 4000, 16, 1000);
        assert!(large > 2.0 * small, "k=1000: {small}, k=4000: {large}");
    }

    #[test]
    fn works_on_plain_sequences() {
        let inst = StreamInstance::from_sequence(vec![3u64, 8, 1]).unwrap();
        let mut meter = MemoryMeter::new();
        let mut rng = RandomSource::new(0);
        let x = warmup_select(&mut inst.cursor(), 3, 2, 2, &mut rng, &mut meter).unwrap();
        assert_eq!(x, Extended::Finite(3));
    }
}
