//! Interval statistics over traces.
//!
//! Intervals are 1-based and inclusive: learning iteration `n` is the trace
//! record with `iteration == n - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policy::PolicyKind;
use crate::sim::{Mode, Trace};

pub type Interval = (usize, usize);

pub const DEFAULT_INTERVALS: [Interval; 5] = [(1, 100), (101, 500), (501, 1000), (1001, 2500), (2501, 10_000)];

/// The default intervals clipped to `iterations`.
pub fn default_intervals(iterations: usize) -> Vec<Interval> {
    DEFAULT_INTERVALS
        .iter()
        .filter(|(s, _)| *s <= iterations)
        .map(|&(s, e)| (s, e.min(iterations)))
        .collect()
}

/// Intervals must be ordered, disjoint and cover `[1, iterations]`.
pub fn validate_intervals(intervals: &[Interval], iterations: usize) -> Result<()> {
    let mut next = 1;
    for &(s, e) in intervals {
        if s != next || e < s {
            return Err(Error::Config(format!(
                "interval {s}-{e} breaks the cover of [1, {iterations}] (expected a start of {next})"
            )));
        }
        next = e + 1;
    }
    if next != iterations + 1 {
        return Err(Error::Config(format!("intervals stop at {} but there are {iterations} iterations", next - 1)));
    }
    Ok(())
}

/// Sample standard deviation (n - 1); `None` below two samples.
pub fn sample_std(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    Some(v.sqrt())
}

/// Statistics of one trace over one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalStats {
    /// Mean throughput over every record (inactive WNs count as 0).
    pub mean_tpt_mbps: f64,
    /// Per-WN throughput std over its active iterations, averaged over WNs
    /// with at least two samples; 0 when there are none.
    pub temporal_std_mbps: f64,
}

impl IntervalStats {
    pub fn aggregate_mbps(&self, n_wns: usize) -> f64 {
        self.mean_tpt_mbps * n_wns as f64
    }
}

pub fn interval_stats(trace: &Trace, (start, end): Interval) -> IntervalStats {
    let (lo, hi) = (start - 1, end.min(trace.iterations));
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut std_sum = 0.0;
    let mut std_n = 0usize;
    let mut xs = Vec::with_capacity(hi - lo);
    for wn in 0..trace.n_wns {
        xs.clear();
        for t in lo..hi {
            let r = trace.get(t, wn);
            sum += r.throughput_mbps;
            count += 1;
            if r.active {
                xs.push(r.throughput_mbps);
            }
        }
        if let Some(s) = sample_std(&xs) {
            std_sum += s;
            std_n += 1;
        }
    }
    IntervalStats {
        mean_tpt_mbps: if count > 0 { sum / count as f64 } else { 0.0 },
        temporal_std_mbps: if std_n > 0 { std_sum / std_n as f64 } else { 0.0 },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n_wns: usize,
    pub policy: PolicyKind,
    pub mode: Mode,
    pub interval: Interval,
    pub mean_tpt_mbps: f64,
    pub temporal_std_mbps: f64,
    /// Mean aggregate throughput over the PF-optimal aggregate.
    pub pf_fraction: Option<f64>,
    pub reps: usize,
}

/// Folds repetitions into one row per interval. `pf_aggregates[r]` is the
/// PF-optimal aggregate of repetition `r`'s deployment, when known.
pub fn summarize(
    traces: &[&Trace],
    intervals: &[Interval],
    policy: PolicyKind,
    mode: Mode,
    pf_aggregates: Option<&[f64]>,
) -> Vec<SummaryRow> {
    let per_rep: Vec<Vec<IntervalStats>> = traces
        .iter()
        .map(|t| intervals.iter().map(|&iv| interval_stats(t, iv)).collect())
        .collect();
    fold_rows(&per_rep, traces.first().map_or(0, |t| t.n_wns), intervals, policy, mode, pf_aggregates)
}

pub(crate) fn fold_rows(
    per_rep: &[Vec<IntervalStats>],
    n_wns: usize,
    intervals: &[Interval],
    policy: PolicyKind,
    mode: Mode,
    pf_aggregates: Option<&[f64]>,
) -> Vec<SummaryRow> {
    let reps = per_rep.len();
    intervals
        .iter()
        .enumerate()
        .map(|(j, &interval)| {
            let mean = per_rep.iter().map(|s| s[j].mean_tpt_mbps).sum::<f64>() / reps as f64;
            let std = per_rep.iter().map(|s| s[j].temporal_std_mbps).sum::<f64>() / reps as f64;
            let pf_fraction = pf_aggregates.map(|pf| {
                per_rep
                    .iter()
                    .zip(pf)
                    .map(|(s, &p)| s[j].aggregate_mbps(n_wns) / p)
                    .sum::<f64>()
                    / reps as f64
            });
            SummaryRow {
                n_wns,
                policy,
                mode,
                interval,
                mean_tpt_mbps: mean,
                temporal_std_mbps: std,
                pf_fraction,
                reps,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub mean_agg_mbps: f64,
    pub std_agg_mbps: f64,
    pub reps: usize,
}

/// How often each WN played each arm, over its active iterations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionHistogram {
    /// `frequencies[wn][arm]`; each row sums to 1 (or is all zero for a WN
    /// that never transmitted).
    pub frequencies: Vec<Vec<f64>>,
}

impl ActionHistogram {
    /// Most played arm of `wn` (lowest index on ties).
    pub fn mode(&self, wn: usize) -> usize {
        let row = &self.frequencies[wn];
        let mut best = 0;
        for k in 1..row.len() {
            if row[k] > row[best] {
                best = k;
            }
        }
        best
    }
}

pub fn action_histogram(trace: &Trace, n_arms: usize) -> ActionHistogram {
    action_histogram_many(&[trace], n_arms)
}

/// Histogram pooled over several traces of the same deployment size.
pub fn action_histogram_many(traces: &[&Trace], n_arms: usize) -> ActionHistogram {
    let n = traces.first().map_or(0, |t| t.n_wns);
    let mut counts = vec![vec![0u64; n_arms]; n];
    for trace in traces {
        for r in &trace.records {
            if let Some(k) = r.arm_index {
                counts[r.wn_id][k] += 1;
            }
        }
    }
    let frequencies = counts
        .into_iter()
        .map(|row| {
            let total: u64 = row.iter().sum();
            row.into_iter()
                .map(|c| if total > 0 { c as f64 / total as f64 } else { 0.0 })
                .collect()
        })
        .collect();
    ActionHistogram { frequencies }
}
