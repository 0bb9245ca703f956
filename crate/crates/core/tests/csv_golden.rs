use std::fs;
use std::path::Path;

use sr_bandits::harness::csv::{HISTOGRAM_HEADER, SUMMARY_HEADER, SWEEP_HEADER, TRACE_HEADER};
use sr_bandits::harness::{self, ExperimentConfig};

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn headers_are_fixed() {
    assert_eq!(TRACE_HEADER, "iteration,wn_id,channel,tx_power_dbm,active,throughput_mbps,reward");
    assert_eq!(
        SUMMARY_HEADER,
        "n_wns,policy,mode,interval_start,interval_end,mean_tpt_mbps,temporal_std_mbps,pf_fraction,reps"
    );
    assert_eq!(SWEEP_HEADER, "param,value,mean_agg_tpt_mbps,std_agg_tpt_mbps,reps");
    assert_eq!(HISTOGRAM_HEADER, "wn_id,arm,channel,tx_power_dbm,frequency");
}

#[test]
fn small_run_matches_golden_files() {
    let cfg_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/small.cfg");
    let out = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::from_file(&cfg_path).unwrap();
    cfg.out = out.path().to_path_buf();
    harness::run_experiment(&cfg).unwrap();
    for name in ["summary.csv", "trace_rep0001.csv", "histogram.csv", "oracle.kv"] {
        let got = fs::read_to_string(out.path().join(name)).unwrap();
        assert_eq!(got, golden(name), "{name} drifted from its golden copy");
    }
}

#[test]
fn files_use_lf_and_a_header_line() {
    for name in ["summary.csv", "trace_rep0001.csv", "histogram.csv"] {
        let text = golden(name);
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
        let header = text.lines().next().unwrap();
        let cols = header.split(',').count();
        assert!(text.lines().all(|l| l.split(',').count() == cols), "{name}: ragged rows");
    }
}
