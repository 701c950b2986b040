use std::fs::File;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use randorder::approx::estimate_quantile;
use randorder::exact::{build_schedule, check_good_event, exact_select, good_event_trace, normalize_block};
use randorder::secretary::{
    choose_top_k, competitive_ratio, ApproxEstimator, OracleEstimator, QuantileEstimator, WarmupEstimator,
};
use randorder::{oracle, warmup_select, ApproxConfig, Error, Extended, MemoryMeter, RandomSource, StreamInstance};

use crate::config::{EstimatorKind, ExperimentConfig, Mode};
use crate::instances::{build_instance, Key};
use crate::summary::{summarize, Summary};
use crate::{HarnessError, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub returned: Option<f64>,
    pub returned_rank: Option<usize>,
    pub abs_error: Option<usize>,
    pub success: Option<bool>,
    pub estimator: Option<&'static str>,
    pub accepted_count: Option<usize>,
    pub accepted_sum: Option<f64>,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    pub peak_words: usize,
    /// Good-event violations, in exact mode only.
    pub violations: Option<Vec<String>>,
}

#[derive(Serialize)]
struct QuantileRow {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    m: usize,
    returned_rank: Option<usize>,
    abs_error: Option<usize>,
    success: bool,
    peak_words: usize,
}

#[derive(Serialize)]
struct SecretaryRow<'a> {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    estimator: &'a str,
    accepted_count: usize,
    accepted_sum: f64,
    opt: f64,
    ratio: f64,
    peak_words: usize,
}

/// All trials and the summary for one target.
#[derive(Debug, Clone)]
pub struct KResult {
    pub k: usize,
    pub m: usize,
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

fn estimator_for(kind: EstimatorKind, m: usize, c0: f64) -> Result<Box<dyn QuantileEstimator<Key> + Send>> {
    Ok(match kind {
        EstimatorKind::Oracle => Box::new(OracleEstimator),
        EstimatorKind::Warmup => Box::new(WarmupEstimator { m }),
        EstimatorKind::Approx => Box::new(ApproxEstimator {
            config: Some(ApproxConfig::new(m, c0)?),
        }),
    })
}

fn score(record: &mut TrialRecord, instance: &StreamInstance<Key>, out: Extended<Key>) -> Result<()> {
    let values = instance.values();
    let want = oracle::exact_kth(values, record.k)?;
    record.success = Some(out == Extended::Finite(want));
    if let Extended::Finite(x) = out {
        let rank = oracle::true_rank(values, x, Extended::Top)?;
        record.returned = Some(x.0);
        record.returned_rank = Some(rank);
        record.abs_error = Some(rank.abs_diff(record.k));
    }
    Ok(())
}

/// Runs one trial. The instance draws from `seed.derive(0)` and
/// `seed.derive(2)`, the algorithm from `seed.derive(1)`.
pub fn run_trial(cfg: &ExperimentConfig, k: usize, m: usize, trial: usize) -> Result<TrialRecord> {
    let seed = cfg.seed ^ trial as u64;
    let base = RandomSource::new(seed);
    let instance = build_instance(cfg.family, cfg.n, k, cfg.eps, &base)?;
    let mut rng = base.derive(1);
    let mut meter = MemoryMeter::new();
    let mut record = TrialRecord {
        trial,
        seed,
        n: cfg.n,
        k,
        m,
        ..TrialRecord::default()
    };
    let n = cfg.n;
    let mut cursor = instance.cursor();
    match cfg.mode {
        Mode::QuantileApprox => {
            let config = ApproxConfig::new(m, cfg.c0)?;
            let out = estimate_quantile(&mut cursor, n, k, &config, &mut rng, &mut meter)?;
            score(&mut record, &instance, out)?;
        }
        Mode::QuantileWarmup => {
            let out = warmup_select(&mut cursor, n, k, m, &mut rng, &mut meter)?;
            score(&mut record, &instance, out)?;
        }
        Mode::QuantileExact => {
            let m = normalize_block(m)?;
            record.m = m;
            let schedule = build_schedule(n, k, m, &mut rng.clone())?;
            let out = match exact_select(&mut cursor, n, k, m, &mut rng, &mut meter) {
                Ok(x) => Extended::Finite(x),
                Err(Error::SelectionFailure(_)) => Extended::Bottom,
                Err(e) => return Err(e.into()),
            };
            score(&mut record, &instance, out)?;
            let sequence: Vec<Key> = instance.stream().collect();
            let trace = good_event_trace(&sequence, &schedule, m)?;
            record.violations = Some(check_good_event(&trace).iter().map(ToString::to_string).collect());
        }
        Mode::Secretary => {
            let mut estimator = estimator_for(cfg.estimator, m, cfg.c0)?;
            let run = choose_top_k(&mut cursor, n, k, estimator.as_mut(), &mut rng, &mut meter)?;
            let weights: Vec<f64> = instance.values().iter().map(|v| v.0).collect();
            record.estimator = Some(estimator.name());
            record.accepted_count = Some(run.log.len());
            record.accepted_sum = Some(run.log.values().map(|v| v.0).sum());
            record.opt = Some(oracle::opt_sum(&weights, k)?);
            record.ratio = Some(competitive_ratio(&run.log, &instance, k)?);
        }
    }
    record.peak_words = meter.peak();
    Ok(record)
}

/// Runs every trial for every target. Trials run in parallel; records come
/// back in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<KResult>> {
    cfg.validate()?;
    cfg.ks
        .iter()
        .map(|&k| {
            let m = cfg.m_for(k);
            let records = (0..cfg.trials)
                .into_par_iter()
                .map(|t| run_trial(cfg, k, m, t))
                .collect::<Result<Vec<_>>>()?;
            let summary = summarize(&records)?;
            Ok(KResult {
                k,
                m: records.first().map_or(m, |r| r.m),
                records,
                summary,
            })
        })
        .collect()
}

/// Writes the per-trial CSV for `mode`.
pub fn write_csv<W: Write>(mode: Mode, results: &[KResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in results.iter().flat_map(|k| &k.records) {
        if mode == Mode::Secretary {
            w.serialize(SecretaryRow {
                trial: r.trial,
                seed: r.seed,
                n: r.n,
                k: r.k,
                estimator: r.estimator.unwrap_or(""),
                accepted_count: r.accepted_count.unwrap_or(0),
                accepted_sum: r.accepted_sum.unwrap_or(0.0),
                opt: r.opt.unwrap_or(0.0),
                ratio: r.ratio.unwrap_or(0.0),
                peak_words: r.peak_words,
            })?;
        } else {
            w.serialize(QuantileRow {
                trial: r.trial,
                seed: r.seed,
                n: r.n,
                k: r.k,
                m: r.m,
                returned_rank: r.returned_rank,
                abs_error: r.abs_error,
                success: r.success.unwrap_or(false),
                peak_words: r.peak_words,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(mode: Mode, results: &[KResult], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| HarnessError::Io {
        path: path.to_owned(),
        source,
    })?;
    write_csv(mode, results, file).map_err(|source| HarnessError::Csv {
        path: path.to_owned(),
        source,
    })
}
