#![allow(dead_code)]

use sr_bandits::scenario::{build_grid, build_random, Deployment, ScenarioConfig};
use sr_bandits::sim::Trace;
use sr_bandits::{ArmSpace, Environment, RadioParams};

pub fn grid_env() -> Environment {
    let dep = build_grid(&ScenarioConfig::default()).unwrap();
    Environment::new(dep, RadioParams::default(), ArmSpace::default()).unwrap()
}

pub fn random_env(n: usize, seed: u64) -> Environment {
    let cfg = ScenarioConfig { n_wns: n, seed, ..Default::default() };
    let dep = build_random(&cfg, n).unwrap();
    Environment::new(dep, RadioParams::default(), ArmSpace::default()).unwrap()
}

/// Link and throughput figures of one WN from the reference evaluator.
#[derive(Debug, Clone, Copy)]
pub struct RefLink {
    pub throughput_mbps: f64,
    pub sinr: f64,
    /// SNR of the played arm with every other WN silent.
    pub snr: f64,
    /// Isolation throughput at the top power level.
    pub optimal_mbps: f64,
}

fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Straight dB-domain evaluation from the deployment, written without any
/// of the library's channel helpers.
pub fn reference(dep: &Deployment, radio: &RadioParams, arms: &ArmSpace, profile: &[Option<usize>]) -> Vec<RefLink> {
    let n = dep.wns.len();
    let np = arms.powers_dbm.len();
    let pmax = arms.powers_dbm.iter().cloned().fold(f64::MIN, f64::max);
    let loss = |from: usize, to: usize| -> f64 {
        let a = dep.wns[from].ap_position;
        let b = dep.wns[to].sta_position;
        let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
        radio.pl0_db
            + 10.0 * radio.alpha * d.log10()
            + dep.shadow_db[from][to]
            + d / radio.d_obs_m * dep.obstacle_db[from][to]
    };
    let shannon = |snr_db: f64| radio.bandwidth_mhz * (1.0 + db_to_lin(snr_db)).log2();
    (0..n)
        .map(|i| {
            let optimal_mbps = shannon(pmax - loss(i, i) - radio.noise_dbm);
            let Some(k) = profile[i] else {
                return RefLink { throughput_mbps: 0.0, sinr: 0.0, snr: 0.0, optimal_mbps };
            };
            let (ci, pi) = (k / np, k % np);
            let rx_dbm = arms.powers_dbm[pi] - loss(i, i);
            let mut i_mw = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                if let Some(kj) = profile[j] {
                    let (cj, pj) = (kj / np, kj % np);
                    let sep = (cj as f64 - ci as f64).abs();
                    i_mw += db_to_lin(arms.powers_dbm[pj] - loss(j, i) - radio.leakage_db_per_channel * sep);
                }
            }
            let sinr = db_to_lin(rx_dbm) / (i_mw + db_to_lin(radio.noise_dbm));
            RefLink {
                throughput_mbps: radio.bandwidth_mhz * (1.0 + sinr).log2(),
                sinr,
                snr: db_to_lin(rx_dbm) / db_to_lin(radio.noise_dbm),
                optimal_mbps,
            }
        })
        .collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn sample_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Mean aggregate throughput over 0-based iterations `[from, to)`.
pub fn mean_aggregate(trace: &Trace, from: usize, to: usize) -> f64 {
    (from..to).map(|t| trace.aggregate_mbps(t)).sum::<f64>() / (to - from) as f64
}

/// Per-WN throughput std over `[from, to)`, averaged over WNs.
pub fn mean_temporal_std(trace: &Trace, from: usize, to: usize) -> f64 {
    let per_wn: Vec<f64> = (0..trace.n_wns)
        .map(|i| sample_std(&(from..to).map(|t| trace.get(t, i).throughput_mbps).collect::<Vec<_>>()))
        .collect();
    mean(&per_wn)
}
