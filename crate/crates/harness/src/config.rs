use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;

use crate::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    QuantileApprox,
    QuantileExact,
    QuantileWarmup,
    Secretary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorKind {
    Oracle,
    Approx,
    Warmup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    UniformDistinct,
    ZeroOneEps,
    AdversarialPermutedValues,
}

pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n: usize,
    pub ks: Vec<usize>,
    /// Memory parameter; a per-mode default is derived from `k` when unset.
    pub m: Option<usize>,
    pub c0: f64,
    pub estimator: EstimatorKind,
    pub trials: usize,
    pub seed: u64,
    pub family: Family,
    pub eps: f64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::QuantileApprox,
            n: 10_000,
            ks: vec![100],
            m: None,
            c0: randorder::approx::DEFAULT_C0,
            estimator: EstimatorKind::Approx,
            trials: 100,
            seed: 0,
            family: Family::UniformDistinct,
            eps: DEFAULT_EPS,
            out: None,
        }
    }
}

fn usage(msg: impl Into<String>) -> HarnessError {
    HarnessError::Usage(msg.into())
}

pub fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T> {
    T::from_str(value, true).map_err(|_| usage(format!("unknown {key} '{value}'")))
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| usage(format!("bad value for {key}: '{value}'")))
}

/// Parses `64,256` into a list of targets.
pub fn parse_k_list(value: &str) -> Result<Vec<usize>> {
    let ks = value
        .split(',')
        .map(|s| parse_num::<usize>("k", s))
        .collect::<Result<Vec<_>>>()?;
    if ks.is_empty() {
        return Err(usage("k list is empty"));
    }
    Ok(ks)
}

impl ExperimentConfig {
    /// Applies one `key=value` setting. Keys match the CLI flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "mode" => self.mode = parse_enum("mode", value)?,
            "n" => self.n = parse_num("n", value)?,
            "k" => self.ks = parse_k_list(value)?,
            "m" => self.m = Some(parse_num("m", value)?),
            "c0" => self.c0 = parse_num("c0", value)?,
            "estimator" => self.estimator = parse_enum("estimator", value)?,
            "trials" => self.trials = parse_num("trials", value)?,
            "seed" => self.seed = parse_num("seed", value)?,
            "instance" => self.family = parse_enum("instance", value)?,
            "eps" => self.eps = parse_num("eps", value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(usage(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Reads a flat `key=value` file; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("line {}: expected key=value", i + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_owned(),
            source,
        })?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(usage("trials must be at least 1"));
        }
        if self.n == 0 {
            return Err(usage("n must be at least 1"));
        }
        if let Some(&k) = self.ks.iter().find(|&&k| k == 0 || k > self.n) {
            return Err(usage(format!("k = {k} must lie in 1..={}", self.n)));
        }
        if !(self.c0 > 0.0 && self.c0 < 0.5) {
            return Err(usage(format!("c0 = {} must lie in (0, 1/2)", self.c0)));
        }
        if self.m == Some(0) {
            return Err(usage("m must be at least 1"));
        }
        if self.mode == Mode::QuantileExact && self.m.is_some_and(|m| m < 4) {
            return Err(usage("exact selection needs m >= 4"));
        }
        if !(self.eps > 0.0) {
            return Err(usage("eps must be positive"));
        }
        Ok(())
    }

    /// The memory parameter used for target `k`.
    pub fn m_for(&self, k: usize) -> usize {
        if let Some(m) = self.m {
            return m;
        }
        match self.mode {
            Mode::QuantileExact => {
                let m = 4 * (k as f64).sqrt().ceil() as usize;
                (m + m % 2).max(4)
            }
            _ => randorder::ApproxConfig::for_target(k).m,
        }
    }
}
