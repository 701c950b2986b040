//! Ground truth by brute force. Unbounded memory, never metered.

use crate::error::{Error, Result};
use crate::stream::Extended;

/// The `k`-th largest of `values` by a full sort.
pub fn exact_kth<K: Ord + Copy>(values: &[K], k: usize) -> Result<K> {
    if k == 0 || k > values.len() {
        return Err(Error::InvalidTarget { k, n: values.len() });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sorted[k - 1])
}

/// `|{t in values : cap > t >= x}|`; `x` must be one of `values`.
pub fn true_rank<K: Ord + Copy>(values: &[K], x: K, cap: Extended<K>) -> Result<usize> {
    if !values.contains(&x) {
        return Err(Error::NotFound);
    }
    Ok(values
        .iter()
        .filter(|&&t| t >= x && Extended::Finite(t) < cap)
        .count())
}

/// Sum of the `k` largest values.
pub fn opt_sum(values: &[f64], k: usize) -> Result<f64> {
    if k == 0 || k > values.len() {
        return Err(Error::InvalidTarget { k, n: values.len() });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(sorted[..k].iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::RandomSource;

    #[test]
    fn small_examples() {
        assert_eq!(exact_kth(&[9u64, 7, 4, 2], 3).unwrap(), 4);
        assert_eq!(exact_kth(&[3u64, 11, 5], 1).unwrap(), 11);
        assert!(matches!(exact_kth(&[1u64], 2), Err(Error::InvalidTarget { .. })));
        assert!(matches!(exact_kth(&[1u64], 0), Err(Error::InvalidTarget { .. })));
        assert_eq!(opt_sum(&[5.0, 1.0], 1).unwrap(), 5.0);
        assert_eq!(opt_sum(&[5.0, 1.0, 2.5], 3).unwrap(), 8.5);
    }

    #[test]
    fn rank_extremes() {
        let v = [4u64, 8, 15, 16, 23, 42];
        assert_eq!(true_rank(&v, 42, Extended::Top).unwrap(), 1);
        assert_eq!(true_rank(&v, 4, Extended::Top).unwrap(), 6);
        assert_eq!(true_rank(&v, 4, Extended::Finite(16)).unwrap(), 3);
        assert_eq!(true_rank(&v, 5, Extended::Top), Err(Error::NotFound));
    }

    #[test]
    fn kth_has_rank_k_exhaustively() {
        for n in 1..=10u64 {
            let values: Vec<u64> = (0..n).map(|i| (i * 37) % 101).collect();
            for k in 1..=n as usize {
                let x = exact_kth(&values, k).unwrap();
                assert_eq!(true_rank(&values, x, Extended::Top).unwrap(), k);
            }
        }
    }

    #[test]
    fn sort_agrees_with_partial_selection() {
        let mut rng = RandomSource::new(17);
        let mut values: Vec<u64> = (0..10_000).map(|_| rng.next_u64()).collect();
        values.sort_unstable();
        values.dedup();
        for _ in 0..100 {
            let k = rng.index(values.len()) + 1;
            let mut scratch = values.clone();
            let (_, kth, _) = scratch.select_nth_unstable_by(k - 1, |a, b| b.cmp(a));
            assert_eq!(exact_kth(&values, k).unwrap(), *kth);
        }
    }

    #[test]
    fn opt_sum_matches_threshold_sum() {
        let mut rng = RandomSource::new(3);
        for _ in 0..20 {
            let values: Vec<f64> = (0..200).map(|i| i as f64 + rng.unit()).collect();
            let k = rng.index(200) + 1;
            let keys: Vec<u64> = values.iter().map(|v| v.to_bits()).collect();
            let kth = f64::from_bits(exact_kth(&keys, k).unwrap());
            let direct: f64 = values.iter().filter(|&&v| v >= kth).sum();
            assert!((opt_sum(&values, k).unwrap() - direct).abs() < 1e-9);
        }
    }
}
