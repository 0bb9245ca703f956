//! Every policy on the four-network grid, summarized per learning interval
//! and compared with the proportional-fair optimum.
//!
//! cargo run --release --example grid_policies

use sr_bandits::harness::{self, ExperimentConfig};
use sr_bandits::PolicyKind;

fn main() -> sr_bandits::Result<()> {
    println!("{:<9} {:>12} {:>12} {:>12} {:>8}", "policy", "interval", "mean Mbps", "std Mbps", "PF frac");
    for policy in PolicyKind::ALL {
        let cfg = ExperimentConfig { policy, reps: 20, oracle: true, ..Default::default() };
        for row in harness::execute(&cfg, None, false)?.summary {
            println!(
                "{:<9} {:>12} {:>12.2} {:>12.2} {:>8.3}",
                policy.name(),
                format!("{}-{}", row.interval.0, row.interval.1),
                row.mean_tpt_mbps,
                row.temporal_std_mbps,
                row.pf_fraction.unwrap_or(f64::NAN),
            );
        }
    }
    Ok(())
}
