//! Networks joining mid-run: aggregate throughput in 500-iteration windows
//! around each activation.
//!
//! cargo run --release --example dynamic_activation

use sr_bandits::harness::{self, ExperimentConfig, ScenarioKind};

fn main() -> sr_bandits::Result<()> {
    let cfg = ExperimentConfig { scenario: ScenarioKind::Dynamic, reps: 20, ..Default::default() };
    let out = harness::execute(&cfg, None, true)?;
    println!("activations at {:?}", cfg.geometry.activation_iterations);
    for start in (0..cfg.iterations).step_by(500) {
        let mean: f64 = out
            .reps
            .iter()
            .map(|r| {
                let t = r.trace.as_ref().unwrap();
                (start..start + 500).map(|i| t.aggregate_mbps(i)).sum::<f64>() / 500.0
            })
            .sum::<f64>()
            / out.reps.len() as f64;
        println!("{:>5}-{:<5} {:8.2} Mbps {}", start, start + 499, mean, "#".repeat((mean / 40.0) as usize));
    }
    Ok(())
}
