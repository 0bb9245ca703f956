//! Batch experiments: repetitions, summaries, sweeps and CSV artifacts.
//!
//! Every repetition owns its RNG streams and deployment, so the rayon pool
//! can run them in any order; results are folded in repetition order.

pub mod config;
pub mod csv;
pub mod stats;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::{self, Objective, OracleResult, DEFAULT_PROFILE_CAP};
use crate::policy::PolicyParams;
use crate::rng::repetition_seed;
use crate::scenario::{build_dynamic, build_grid, build_random, Deployment};
use crate::sim::{run, Environment, Trace};

pub use config::{ExperimentConfig, ScenarioKind};
pub use stats::{ActionHistogram, Interval, IntervalStats, SummaryRow, SweepRow};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const HISTOGRAM_FILE: &str = "histogram.csv";

pub fn trace_file(rep: usize) -> String {
    format!("trace_rep{rep:04}.csv")
}

/// Oracle file name; fixed scenarios share one deployment across repetitions.
pub fn oracle_file(scenario: ScenarioKind, rep: usize) -> String {
    match scenario {
        ScenarioKind::Random => format!("oracle_rep{rep:04}.kv"),
        _ => "oracle.kv".to_string(),
    }
}

/// Deployment used by repetition `rep`. Grid and dynamic layouts are drawn
/// once from the base seed; random layouts are redrawn per repetition.
pub fn build_deployment(cfg: &ExperimentConfig, rep: usize) -> Result<Deployment> {
    match cfg.scenario {
        ScenarioKind::Grid => build_grid(&cfg.scenario_config(cfg.seed)),
        ScenarioKind::Dynamic => build_dynamic(&cfg.scenario_config(cfg.seed)),
        ScenarioKind::Random => {
            let sc = cfg.scenario_config(repetition_seed(cfg.seed, rep));
            build_random(&sc, cfg.n_wns)
        }
    }
}

pub fn build_environment(cfg: &ExperimentConfig, rep: usize) -> Result<Environment> {
    Environment::new(build_deployment(cfg, rep)?, cfg.radio.clone(), cfg.arms.clone())
}

/// PF optimum of `env`, or `None` when the joint space exceeds the cap.
fn pf_optimum(env: &Environment) -> Result<Option<OracleResult>> {
    match oracle::brute_force(env, Objective::ProportionalFair, DEFAULT_PROFILE_CAP) {
        Ok(r) => Ok(Some(r)),
        Err(Error::SearchTooLarge { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// What one repetition contributes to the fold.
#[derive(Debug, Clone)]
pub struct RepOutcome {
    pub rep: usize,
    pub stats: Vec<IntervalStats>,
    /// Mean aggregate throughput over the whole run.
    pub mean_aggregate_mbps: f64,
    pub oracle: Option<OracleResult>,
    pub histogram: Option<ActionHistogram>,
    /// Kept only when the caller asks for traces in memory.
    pub trace: Option<Trace>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub summary: Vec<SummaryRow>,
    pub reps: Vec<RepOutcome>,
    /// Arm frequencies averaged over repetitions.
    pub histogram: Option<ActionHistogram>,
}

fn mean_aggregate(trace: &Trace) -> f64 {
    (0..trace.iterations).map(|t| trace.aggregate_mbps(t)).sum::<f64>() / trace.iterations as f64
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

struct RepJob<'a> {
    cfg: &'a ExperimentConfig,
    params: &'a PolicyParams,
    intervals: &'a [Interval],
    /// Shared oracle for fixed deployments.
    shared_oracle: Option<&'a Option<OracleResult>>,
    trace_dir: Option<&'a Path>,
    keep_trace: bool,
}

impl RepJob<'_> {
    fn run(&self, rep: usize) -> Result<RepOutcome> {
        let cfg = self.cfg;
        let env = build_environment(cfg, rep)?;
        let seed = repetition_seed(cfg.seed, rep);
        let result = run(&env, cfg.mode, cfg.policy, self.params, cfg.iterations, seed)?;
        let trace = result.trace;
        if let Some(dir) = self.trace_dir {
            write_file(&dir.join(trace_file(rep)), |w| csv::write_trace(&trace, w))?;
        }
        let oracle = match self.shared_oracle {
            Some(shared) => shared.clone(),
            None if cfg.oracle => pf_optimum(&env)?,
            None => None,
        };
        Ok(RepOutcome {
            rep,
            stats: self.intervals.iter().map(|&iv| stats::interval_stats(&trace, iv)).collect(),
            mean_aggregate_mbps: mean_aggregate(&trace),
            oracle,
            histogram: cfg.histogram.then(|| stats::action_histogram(&trace, cfg.arms.len())),
            trace: self.keep_trace.then_some(trace),
        })
    }
}

fn run_reps(job: &RepJob<'_>, reps: usize, parallel: bool) -> Result<Vec<RepOutcome>> {
    // collect() on an indexed parallel iterator preserves repetition order
    if parallel {
        (0..reps).into_par_iter().map(|r| job.run(r)).collect()
    } else {
        (0..reps).map(|r| job.run(r)).collect()
    }
}

fn mean_histogram(reps: &[RepOutcome]) -> Option<ActionHistogram> {
    let first = reps.first()?.histogram.as_ref()?;
    let mut freq = vec![vec![0.0; first.frequencies[0].len()]; first.frequencies.len()];
    for r in reps {
        let h = r.histogram.as_ref()?;
        for (row, hrow) in freq.iter_mut().zip(&h.frequencies) {
            for (a, b) in row.iter_mut().zip(hrow) {
                *a += b;
            }
        }
    }
    for row in &mut freq {
        for a in row.iter_mut() {
            *a /= reps.len() as f64;
        }
    }
    Some(ActionHistogram { frequencies: freq })
}

/// Runs all repetitions in memory. When `trace_dir` is given, per-repetition
/// trace CSVs are written there as the workers finish.
pub fn execute(cfg: &ExperimentConfig, trace_dir: Option<&Path>, keep_traces: bool) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let intervals = cfg.intervals();
    let shared = if cfg.oracle && cfg.scenario != ScenarioKind::Random {
        Some(pf_optimum(&build_environment(cfg, 0)?)?)
    } else {
        None
    };
    let job = RepJob {
        cfg,
        params: &cfg.policy_params,
        intervals: &intervals,
        shared_oracle: shared.as_ref(),
        trace_dir,
        keep_trace: keep_traces,
    };
    let reps = run_reps(&job, cfg.reps, cfg.parallel)?;

    let per_rep: Vec<Vec<IntervalStats>> = reps.iter().map(|r| r.stats.clone()).collect();
    let pf: Option<Vec<f64>> = reps
        .iter()
        .map(|r| r.oracle.as_ref().map(|o| o.aggregate_mbps))
        .collect();
    let summary = stats::fold_rows(&per_rep, cfg.n_wns, &intervals, cfg.policy, cfg.mode, pf.as_deref());
    let histogram = mean_histogram(&reps);
    Ok(ExperimentOutput { summary, reps, histogram })
}

/// Runs the experiment and writes its CSV artifacts under `cfg.out`.
/// Returns the paths written, summary first.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out)?;
    let out = cfg.out.as_path();
    let output = execute(cfg, cfg.trace.then_some(out), false)?;

    let mut written = vec![out.join(SUMMARY_FILE)];
    write_file(&written[0], |w| csv::write_summary(&output.summary, w))?;
    if cfg.trace {
        written.extend((0..cfg.reps).map(|r| out.join(trace_file(r))));
    }
    if cfg.oracle {
        let n_files = if cfg.scenario == ScenarioKind::Random { cfg.reps } else { 1 };
        for rep in output.reps.iter().take(n_files) {
            if let Some(o) = &rep.oracle {
                let path = out.join(oracle_file(cfg.scenario, rep.rep));
                write_file(&path, |w| {
                    oracle::write_kv(o, &mut *w).map_err(|e| std::io::Error::other(e.to_string()))
                })?;
                written.push(path);
            }
        }
    }
    if let Some(h) = &output.histogram {
        let path = out.join(HISTOGRAM_FILE);
        write_file(&path, |w| csv::write_histogram(h, &cfg.arms, w))?;
        written.push(path);
    }
    Ok(written)
}

/// One row per value of the policy's tuning parameter (`eps0` for
/// ε-greedy, `eta0` for EXP3): mean and standard deviation over repetitions
/// of the run-average aggregate throughput.
pub fn tuning_sweep(cfg: &ExperimentConfig, values: &[f64]) -> Result<Vec<SweepRow>> {
    let param = cfg.sweep_param()?;
    let base = ExperimentConfig { sweep: None, oracle: false, histogram: false, trace: false, ..cfg.clone() };
    base.validate()?;
    let intervals = base.intervals();
    let points: Vec<(usize, PolicyParams)> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut p = base.policy_params.clone();
            match param {
                "eps0" => p.eps0 = v,
                _ => p.eta0 = v,
            }
            p.validate().map(|_| (i, p))
        })
        .collect::<Result<_>>()?;

    // flatten (point, rep) so the pool sees every unit of work at once
    let units: Vec<(usize, usize)> =
        (0..points.len()).flat_map(|p| (0..base.reps).map(move |r| (p, r))).collect();
    let eval = |&(p, r): &(usize, usize)| -> Result<f64> {
        let job = RepJob {
            cfg: &base,
            params: &points[p].1,
            intervals: &intervals,
            shared_oracle: Some(&None),
            trace_dir: None,
            keep_trace: false,
        };
        job.run(r).map(|o| o.mean_aggregate_mbps)
    };
    let means: Vec<f64> = if base.parallel {
        units.par_iter().map(eval).collect::<Result<_>>()?
    } else {
        units.iter().map(eval).collect::<Result<_>>()?
    };

    Ok(values
        .iter()
        .zip(means.chunks(base.reps))
        .map(|(&value, xs)| SweepRow {
            param: param.to_string(),
            value,
            mean_agg_mbps: xs.iter().sum::<f64>() / xs.len() as f64,
            std_agg_mbps: stats::sample_std(xs).unwrap_or(0.0),
            reps: xs.len(),
        })
        .collect())
}

/// Runs [`tuning_sweep`] and writes `sweep.csv` under `cfg.out`.
pub fn run_sweep(cfg: &ExperimentConfig, values: &[f64]) -> Result<PathBuf> {
    let rows = tuning_sweep(cfg, values)?;
    fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join(SWEEP_FILE);
    write_file(&path, |w| csv::write_sweep(&rows, w))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::PolicyKind;
    use crate::sim::Mode;

    fn small(scenario: ScenarioKind) -> ExperimentConfig {
        ExperimentConfig {
            scenario,
            n_wns: 4,
            iterations: 300,
            reps: 3,
            intervals: Some(vec![(1, 100), (101, 300)]),
            ..Default::default()
        }
    }

    #[test]
    fn serial_equals_parallel() {
        for scenario in [ScenarioKind::Grid, ScenarioKind::Random] {
            let a = execute(&ExperimentConfig { parallel: false, ..small(scenario) }, None, false).unwrap();
            let b = execute(&ExperimentConfig { parallel: true, ..small(scenario) }, None, false).unwrap();
            assert_eq!(a.summary, b.summary);
        }
    }

    #[test]
    fn summary_matches_in_memory_fold() {
        let cfg = ExperimentConfig { oracle: true, ..small(ScenarioKind::Grid) };
        let out = execute(&cfg, None, true).unwrap();
        let traces: Vec<&Trace> = out.reps.iter().map(|r| r.trace.as_ref().unwrap()).collect();
        let pf: Vec<f64> = out.reps.iter().map(|r| r.oracle.as_ref().unwrap().aggregate_mbps).collect();
        let again = stats::summarize(&traces, &cfg.intervals(), cfg.policy, cfg.mode, Some(&pf));
        assert_eq!(out.summary, again);
        for row in &out.summary {
            let f = row.pf_fraction.unwrap();
            assert!(f > 0.0 && f <= 1.0 + 1e-9, "{f}");
        }
    }

    #[test]
    fn random_reps_use_distinct_layouts() {
        let cfg = small(ScenarioKind::Random);
        let a = build_deployment(&cfg, 0).unwrap();
        let b = build_deployment(&cfg, 1).unwrap();
        assert_ne!(a.wns[0].ap_position, b.wns[0].ap_position);
        let g = small(ScenarioKind::Grid);
        assert_eq!(build_deployment(&g, 0).unwrap(), build_deployment(&g, 5).unwrap());
    }

    #[test]
    fn sweep_shape() {
        let cfg = ExperimentConfig {
            policy: PolicyKind::EGreedy,
            mode: Mode::Concurrent,
            reps: 2,
            ..small(ScenarioKind::Grid)
        };
        let rows = tuning_sweep(&cfg, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.param == "eps0" && r.reps == 2));
        let bad = ExperimentConfig { policy: PolicyKind::Ucb, ..cfg };
        assert!(tuning_sweep(&bad, &[0.1]).is_err());
    }

    #[test]
    fn histogram_rows_sum_to_one() {
        let cfg = ExperimentConfig { histogram: true, ..small(ScenarioKind::Grid) };
        let h = execute(&cfg, None, false).unwrap().histogram.unwrap();
        for row in &h.frequencies {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
