//! Oracle-side check of the conditions under which exact selection is
//! guaranteed to succeed.
//!
//! Stages are numbered `1..=L` here; stage `i` covers arrivals
//! `B_i + 1 ..= B_{i+1}`. For each stage the trace records, relative to
//! the prefix `s_{1:B_i}`:
//! - the rank among `s_{1:B_{i+1}}` of the prefix's `T_{i-1}`-th largest;
//! - how many stage arrivals land between its `(T_{i-1} - m + 1)`-th and
//!   `T_{i-1}`-th largest;
//! - how many land between its `T_{i-1}`-th and `(T_{i-1} + m)`-th largest.

use std::fmt;

use crate::error::{Error, Result};

use super::schedule::StageSchedule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageCounts {
    pub stage: usize,
    /// `T_i`.
    pub target: usize,
    /// `T_{i-1}`.
    pub prev_target: usize,
    /// `B_i`.
    pub prefix: usize,
    /// `B_{i+1}`.
    pub end: usize,
    /// `None` when the prefix has fewer than `T_{i-1}` elements (or `T_{i-1} = 0`).
    pub center_rank: Option<usize>,
    pub lower_band: Option<usize>,
    pub upper_band: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodEventTrace {
    pub m: usize,
    /// Start stage and its target, when a stage with `T_i > m/2` exists.
    pub start: Option<(usize, usize)>,
    pub stages: Vec<StageCounts>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    CenterDrift { stage: usize, rank: Option<usize>, target: usize },
    ThinLowerBand { stage: usize, count: Option<usize> },
    ThinUpperBand { stage: usize, count: Option<usize> },
    LargeStart { stage: usize, target: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CenterDrift { stage, rank, target } => match rank {
                Some(r) => write!(f, "stage {stage}: center rank {r} too far from target {target}"),
                None => write!(f, "stage {stage}: center element undefined (target {target})"),
            },
            Violation::ThinLowerBand { stage, count } => {
                write!(f, "stage {stage}: {} arrivals in the band above the center", count.unwrap_or(0))
            }
            Violation::ThinUpperBand { stage, count } => {
                write!(f, "stage {stage}: {} arrivals in the band below the center", count.unwrap_or(0))
            }
            Violation::LargeStart { stage, target } => write!(f, "start stage {stage} has target {target}"),
        }
    }
}

/// Computes the trace of `sequence` (arrival order) under `schedule`.
///
/// Costs one sort plus one linear scan per stage.
pub fn good_event_trace<K: Ord + Copy>(sequence: &[K], schedule: &StageSchedule, m: usize) -> Result<GoodEventTrace> {
    let n = *schedule.boundaries.last().expect("schedule has boundaries");
    if sequence.len() != n {
        return Err(Error::DomainError(format!(
            "sequence has {} elements, schedule expects {n}",
            sequence.len()
        )));
    }
    let mut order: Vec<(K, usize)> = sequence.iter().enumerate().map(|(j, &x)| (x, j + 1)).collect();
    order.sort_unstable_by(|a, b| b.0.cmp(&a.0));

    let last = schedule.last_stage();
    let mut stages = Vec::with_capacity(last);
    for i in 1..=last {
        let prefix = schedule.boundaries[i];
        let end = schedule.boundaries[i + 1];
        let prev_target = schedule.targets[i - 1];
        // Stage arrivals strictly above the r-th largest of the prefix, for
        // the three ranks of interest.
        let wanted = [prev_target.checked_sub(m - 1).filter(|&r| r >= 1), Some(prev_target).filter(|&r| r >= 1), Some(prev_target + m)];
        let mut above = [None; 3];
        let (mut seen_prefix, mut seen_new) = (0usize, 0usize);
        for &(_, pos) in &order {
            if pos <= prefix {
                seen_prefix += 1;
                for (slot, r) in above.iter_mut().zip(wanted) {
                    if r == Some(seen_prefix) {
                        *slot = Some(seen_new);
                    }
                }
                if seen_prefix >= prev_target + m {
                    break;
                }
            } else if pos <= end {
                seen_new += 1;
            }
        }
        let [a1, a2, a3] = above;
        stages.push(StageCounts {
            stage: i,
            target: schedule.targets[i],
            prev_target,
            prefix,
            end,
            center_rank: a2.map(|a| prev_target + a),
            lower_band: a1.zip(a2).map(|(x, y)| y - x),
            upper_band: a2.zip(a3).map(|(x, y)| y - x),
        });
    }
    Ok(GoodEventTrace {
        m,
        start: schedule.start.map(|i| (i, schedule.targets[i])),
        stages,
    })
}

/// Lists every violated condition; empty means the good event held.
pub fn check_good_event(trace: &GoodEventTrace) -> Vec<Violation> {
    let m = trace.m;
    let half = m / 2;
    let mut out = Vec::new();
    for s in &trace.stages {
        if 2 * s.target >= m {
            let ok = s.center_rank.is_some_and(|r| r + half >= s.target && r <= s.target + half);
            if !ok {
                out.push(Violation::CenterDrift {
                    stage: s.stage,
                    rank: s.center_rank,
                    target: s.target,
                });
            }
        }
        if s.stage >= 2 {
            if s.prev_target > m && s.lower_band.is_none_or(|c| c < half) {
                out.push(Violation::ThinLowerBand {
                    stage: s.stage,
                    count: s.lower_band,
                });
            }
            if s.prev_target + m <= s.prefix && s.upper_band.is_none_or(|c| c < half) {
                out.push(Violation::ThinUpperBand {
                    stage: s.stage,
                    count: s.upper_band,
                });
            }
        }
    }
    if let Some((stage, target)) = trace.start {
        if target > 2 * m {
            out.push(Violation::LargeStart { stage, target });
        }
    }
    out
}
