//! Hindsight regret of each policy for one network of a random layout,
//! replaying every fixed arm against what the others actually played.
//!
//! cargo run --release --example regret

use sr_bandits::harness::{self, ExperimentConfig, ScenarioKind};
use sr_bandits::oracle::empirical_regret;
use sr_bandits::sim::run;
use sr_bandits::{Mode, PolicyKind, PolicyParams};

fn main() -> sr_bandits::Result<()> {
    let cfg = ExperimentConfig { scenario: ScenarioKind::Random, n_wns: 4, ..Default::default() };
    let env = harness::build_environment(&cfg, 0)?;
    let checkpoints = [100, 1000, 5000, 10_000];
    println!("{:<9} {}", "policy", checkpoints.map(|c| format!("{c:>9}")).join(""));
    for policy in PolicyKind::ALL {
        let r = run(&env, Mode::Concurrent, policy, &PolicyParams::default(), 10_000, 7)?;
        let curve = &empirical_regret(&r.trace, &env)[0];
        let cells: String = checkpoints.iter().map(|&c| format!("{:>9.1}", curve.cumulative[c - 1])).collect();
        println!("{:<9} {cells}", policy.name());
    }
    Ok(())
}
