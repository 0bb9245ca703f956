//! Exhaustive search of the grid's joint action space under both
//! objectives, and the key-value export the harness writes.
//!
//! cargo run --release --example pf_oracle

use std::time::Instant;

use sr_bandits::harness::{self, ExperimentConfig};
use sr_bandits::oracle::{brute_force, write_kv, DEFAULT_PROFILE_CAP};
use sr_bandits::Objective;

fn main() -> sr_bandits::Result<()> {
    let env = harness::build_environment(&ExperimentConfig::default(), 0)?;
    for objective in [Objective::ProportionalFair, Objective::MaxAggregate] {
        let start = Instant::now();
        let best = brute_force(&env, objective, DEFAULT_PROFILE_CAP)?;
        println!("{} ({} profiles, {:.1?})", objective.name(), best.profiles_evaluated, start.elapsed());
        for (i, (arm, g)) in best.best_profile.iter().zip(&best.per_wn_throughput).enumerate() {
            println!("  WN{i}: channel {} at {:>3} dBm -> {g:7.2} Mbps", arm.channel, arm.tx_power_dbm);
        }
        println!("  aggregate {:.2} Mbps", best.aggregate_mbps);
        if objective == Objective::ProportionalFair {
            write_kv(&best, std::io::stdout().lock())?;
        }
    }
    Ok(())
}
