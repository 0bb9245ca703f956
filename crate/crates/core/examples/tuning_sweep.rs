//! Sweeps ε₀ for ε-greedy and η₀ for EXP3 over 0.0..=1.0 and writes
//! `sweep.csv` for each into `out/sweep_<policy>/`.
//!
//! cargo run --release --example tuning_sweep

use std::fs::{self, File};

use sr_bandits::harness::{self, config::parse_sweep_values, csv::write_sweep, ExperimentConfig};
use sr_bandits::PolicyKind;

fn main() -> sr_bandits::Result<()> {
    let values = parse_sweep_values("0:1:0.1")?;
    for policy in [PolicyKind::EGreedy, PolicyKind::Exp3] {
        let cfg = ExperimentConfig {
            policy,
            reps: 50,
            out: format!("out/sweep_{policy}").into(),
            ..Default::default()
        };
        let rows = harness::tuning_sweep(&cfg, &values)?;
        fs::create_dir_all(&cfg.out)?;
        write_sweep(&rows, File::create(cfg.out.join(harness::SWEEP_FILE))?)?;
        println!("{policy}:");
        for r in rows {
            println!("  {}={:<4} aggregate {:8.2} ± {:6.2} Mbps", r.param, r.value, r.mean_agg_mbps, r.std_agg_mbps);
        }
    }
    Ok(())
}
