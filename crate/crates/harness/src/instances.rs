//! Value-set families. Every family is randomly permuted on arrival.

use ordered_float::OrderedFloat;
use randorder::{make_instance, Error, RandomSource, StreamInstance};

use crate::config::{Family, DEFAULT_EPS};
use crate::Result;

pub type Key = OrderedFloat<f64>;

/// `n` distinct values, one uniform draw in each cell `[i/n, (i+1)/n)`.
pub fn uniform_distinct_values(n: usize, rng: &mut RandomSource) -> Vec<Key> {
    (0..n).map(|i| OrderedFloat((i as f64 + rng.unit()) / n as f64)).collect()
}

/// `k` near-ones `1 - i*eps` and `n - k` distinct near-zeros `j*eps/n`.
pub fn zero_one_eps_values(n: usize, k: usize, eps: f64) -> Result<Vec<Key>> {
    if k == 0 || k > n {
        return Err(Error::InvalidTarget { k, n }.into());
    }
    if !(eps > 0.0 && eps < 1.0 / (k as f64 + 1.0)) {
        return Err(Error::DomainError(format!("eps = {eps} must lie in (0, 1/(k+1))")).into());
    }
    let ones = (1..=k).map(|i| OrderedFloat(1.0 - i as f64 * eps));
    let zeros = (0..n - k).map(|j| OrderedFloat(j as f64 * eps / n as f64));
    Ok(ones.chain(zeros).collect())
}

/// Shrinks the default `eps` when `k * eps >= 1`. Any other value is used
/// as given and validated by [`zero_one_eps_values`].
pub fn effective_eps(k: usize, eps: f64) -> f64 {
    if eps == DEFAULT_EPS && k as f64 * eps >= 1.0 {
        1.0 / (2.0 * (k as f64 + 1.0))
    } else {
        eps
    }
}

/// Exponentially spaced values `exp(600 i / n)`, spanning most of the `f64` range.
pub fn adversarial_values(n: usize) -> Vec<Key> {
    (0..n).map(|i| OrderedFloat((600.0 * i as f64 / n as f64).exp())).collect()
}

/// Draws an instance; values come from `rng.derive(2)`, the arrival order
/// from `rng.derive(0)`.
pub fn build_instance(family: Family, n: usize, k: usize, eps: f64, rng: &RandomSource) -> Result<StreamInstance<Key>> {
    let values = match family {
        Family::UniformDistinct => uniform_distinct_values(n, &mut rng.derive(2)),
        Family::ZeroOneEps => zero_one_eps_values(n, k, effective_eps(k, eps))?,
        Family::AdversarialPermutedValues => adversarial_values(n),
    };
    Ok(make_instance(values, rng.derive(0).next_u64())?)
}
