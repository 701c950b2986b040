use std::fmt;

use crate::experiment::TrialRecord;
use crate::{HarnessError, Result};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub trials: usize,
    /// Statistics of `|rank - k|` over trials that returned an element.
    pub mean_error: Option<f64>,
    pub median_error: Option<f64>,
    pub stderr_error: Option<f64>,
    pub successes: usize,
    /// Present in quantile modes, where each trial is scored exact or not.
    pub success_rate: Option<f64>,
    pub success_interval: Option<(f64, f64)>,
    pub mean_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    pub stderr_ratio: Option<f64>,
    pub max_peak_words: usize,
    /// Fraction of traced trials with at least one good-event violation.
    pub violation_rate: Option<f64>,
}

fn mean_and_stderr(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, (var / n).sqrt()))
}

fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 })
}

pub fn summarize(records: &[TrialRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(HarnessError::Usage("no trial records to summarize".into()));
    }
    let errors: Vec<f64> = records.iter().filter_map(|r| r.abs_error).map(|e| e as f64).collect();
    let ratios: Vec<f64> = records.iter().filter_map(|r| r.ratio).collect();
    let scored = records.iter().filter(|r| r.success.is_some()).count();
    let successes = records.iter().filter(|r| r.success == Some(true)).count();
    let traced: Vec<usize> = records.iter().filter_map(|r| r.violations.as_ref().map(Vec::len)).collect();
    let err_stats = mean_and_stderr(&errors);
    let ratio_stats = mean_and_stderr(&ratios);
    Ok(Summary {
        trials: records.len(),
        mean_error: err_stats.map(|s| s.0),
        median_error: median(&errors),
        stderr_error: err_stats.map(|s| s.1),
        successes,
        success_rate: (scored > 0).then(|| successes as f64 / scored as f64),
        success_interval: (scored > 0).then(|| wilson_interval(successes, scored)),
        mean_ratio: ratio_stats.map(|s| s.0),
        min_ratio: ratios.iter().copied().reduce(f64::min),
        stderr_ratio: ratio_stats.map(|s| s.1),
        max_peak_words: records.iter().map(|r| r.peak_words).max().unwrap_or(0),
        violation_rate: (!traced.is_empty())
            .then(|| traced.iter().filter(|&&v| v > 0).count() as f64 / traced.len() as f64),
    })
}

impl fmt::Display for Summary {
    /// One `key=value` line per statistic; absent statistics are omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trials={}", self.trials)?;
        let optional = [
            ("mean_error", self.mean_error),
            ("median_error", self.median_error),
            ("stderr_error", self.stderr_error),
        ];
        for (key, value) in optional {
            if let Some(v) = value {
                writeln!(f, "{key}={v:.4}")?;
            }
        }
        if let (Some(rate), Some((lo, hi))) = (self.success_rate, self.success_interval) {
            writeln!(f, "success_rate={rate:.4}")?;
            writeln!(f, "success_wilson_low={lo:.4}")?;
            writeln!(f, "success_wilson_high={hi:.4}")?;
        }
        let optional = [
            ("mean_ratio", self.mean_ratio),
            ("min_ratio", self.min_ratio),
            ("stderr_ratio", self.stderr_ratio),
            ("violation_rate", self.violation_rate),
        ];
        for (key, value) in optional {
            if let Some(v) = value {
                writeln!(f, "{key}={v:.6}")?;
            }
        }
        write!(f, "max_peak_words={}", self.max_peak_words)
    }
}
