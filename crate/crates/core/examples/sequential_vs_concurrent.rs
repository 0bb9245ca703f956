//! Thompson sampling with all networks deciding at once versus one network
//! per iteration, on the same grid and seeds.
//!
//! cargo run --release --example sequential_vs_concurrent

use sr_bandits::harness::{self, ExperimentConfig};
use sr_bandits::{Mode, PolicyKind};

fn main() -> sr_bandits::Result<()> {
    for mode in [Mode::Concurrent, Mode::Sequential] {
        let cfg = ExperimentConfig { policy: PolicyKind::Thompson, mode, reps: 20, ..Default::default() };
        println!("{mode}:");
        for row in harness::execute(&cfg, None, false)?.summary {
            println!(
                "  {:>5}-{:<5} mean {:7.2} Mbps  temporal std {:7.2} Mbps",
                row.interval.0, row.interval.1, row.mean_tpt_mbps, row.temporal_std_mbps
            );
        }
    }
    Ok(())
}
