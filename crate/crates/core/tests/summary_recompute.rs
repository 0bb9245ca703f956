use std::fs::{self, File};
use std::io::BufReader;

use sr_bandits::harness::csv::read_trace;
use sr_bandits::harness::stats::{interval_stats, summarize};
use sr_bandits::harness::{self, ExperimentConfig, ScenarioKind};
use sr_bandits::{Mode, PolicyKind};

fn parse_summary(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

/// The summary CSV is a fold of the trace CSVs: recompute it from the
/// traces and compare at the precision the files carry.
#[test]
fn summary_csv_recomputes_from_trace_csvs() {
    for (scenario, n, policy, mode) in [
        (ScenarioKind::Grid, 4, PolicyKind::Ucb, Mode::Concurrent),
        (ScenarioKind::Random, 3, PolicyKind::EGreedy, Mode::Sequential),
        (ScenarioKind::Dynamic, 4, PolicyKind::Thompson, Mode::Concurrent),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            scenario,
            n_wns: n,
            policy,
            mode,
            iterations: 6000,
            reps: 3,
            trace: true,
            out: dir.path().to_path_buf(),
            ..Default::default()
        };
        harness::run_experiment(&cfg).unwrap();
        let traces: Vec<_> = (0..cfg.reps)
            .map(|r| {
                let f = File::open(dir.path().join(harness::trace_file(r))).unwrap();
                read_trace(BufReader::new(f), &cfg.arms).unwrap()
            })
            .collect();
        let refs: Vec<_> = traces.iter().collect();
        let rows = summarize(&refs, &cfg.intervals(), policy, mode, None);
        let written = parse_summary(&fs::read_to_string(dir.path().join(harness::SUMMARY_FILE)).unwrap());
        assert_eq!(rows.len(), written.len());
        for (row, cols) in rows.iter().zip(&written) {
            assert_eq!(cols[3].parse::<usize>().unwrap(), row.interval.0);
            assert_eq!(cols[4].parse::<usize>().unwrap(), row.interval.1);
            for (col, value) in [(5, row.mean_tpt_mbps), (6, row.temporal_std_mbps)] {
                let file: f64 = cols[col].parse().unwrap();
                // trace values carry 6 significant digits
                assert!((file - value).abs() <= 1e-4 * value.abs().max(1.0), "{file} vs {value}");
            }
            assert_eq!(cols[7], "");
        }
    }
}

/// In memory the fold is exact to 1e-9.
#[test]
fn in_memory_summary_is_a_pure_fold() {
    let cfg = ExperimentConfig { iterations: 3000, reps: 4, ..Default::default() };
    let out = harness::execute(&cfg, None, true).unwrap();
    let traces: Vec<_> = out.reps.iter().map(|r| r.trace.as_ref().unwrap()).collect();
    for (j, row) in out.summary.iter().enumerate() {
        let iv = cfg.intervals()[j];
        let by_hand: f64 = traces.iter().map(|t| interval_stats(t, iv).mean_tpt_mbps).sum::<f64>() / 4.0;
        assert!((row.mean_tpt_mbps - by_hand).abs() <= 1e-9 * by_hand);
        let direct: f64 = traces
            .iter()
            .map(|t| {
                let (s, e) = iv;
                let cells = ((e - s + 1) * t.n_wns) as f64;
                (s - 1..e).map(|i| t.aggregate_mbps(i)).sum::<f64>() / cells
            })
            .sum::<f64>()
            / 4.0;
        assert!((row.mean_tpt_mbps - direct).abs() <= 1e-9 * direct);
    }
}
