//! Random deployments of 2 to 8 networks: each learner against the static
//! max-power baseline over the last learning interval.
//!
//! cargo run --release --example random_scenarios

use sr_bandits::harness::{self, ExperimentConfig, ScenarioKind};
use sr_bandits::PolicyKind;

fn main() -> sr_bandits::Result<()> {
    for n_wns in [2, 4, 6, 8] {
        print!("N={n_wns}:");
        for policy in PolicyKind::ALL {
            let cfg = ExperimentConfig { scenario: ScenarioKind::Random, n_wns, policy, reps: 50, ..Default::default() };
            let last = harness::execute(&cfg, None, false)?.summary.pop().unwrap();
            print!("  {policy} {:.1}", last.mean_tpt_mbps);
        }
        println!();
    }
    Ok(())
}
