//! Indoor link budget and Shannon throughput.
//!
//! Losses are in dB, powers in dBm. Interference terms are always summed in
//! milliwatts. Receivers are STAs: the loss `gain_db[i][j]` is measured from
//! the AP of WN `i` to the STA of WN `j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Deployment;

/// One (channel, transmit power) configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arm {
    pub channel: usize,
    pub tx_power_dbm: f64,
}

/// The K = channels × powers action set shared by every WN.
///
/// Arm `k` is `channel = k / powers.len()`, `power = powers[k % powers.len()]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmSpace {
    pub channels: usize,
    pub powers_dbm: Vec<f64>,
}

impl Default for ArmSpace {
    fn default() -> Self {
        ArmSpace {
            channels: 3,
            powers_dbm: vec![-15.0, 0.0, 15.0, 30.0],
        }
    }
}

impl ArmSpace {
    pub fn validate(&self) -> Result<()> {
        if self.channels == 0 {
            return Err(Error::Config("at least one channel is required".into()));
        }
        if self.powers_dbm.is_empty() {
            return Err(Error::Config("the power set is empty".into()));
        }
        if self.powers_dbm.iter().any(|p| !p.is_finite()) {
            return Err(Error::Config("transmit powers must be finite".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.channels * self.powers_dbm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn arm(&self, k: usize) -> Arm {
        assert!(k < self.len(), "arm index {k} out of range");
        let np = self.powers_dbm.len();
        Arm {
            channel: k / np,
            tx_power_dbm: self.powers_dbm[k % np],
        }
    }

    pub fn channel_of(&self, k: usize) -> usize {
        k / self.powers_dbm.len()
    }

    pub fn power_index_of(&self, k: usize) -> usize {
        k % self.powers_dbm.len()
    }

    pub fn index(&self, channel: usize, power_index: usize) -> usize {
        channel * self.powers_dbm.len() + power_index
    }

    pub fn max_power_dbm(&self) -> f64 {
        self.powers_dbm
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index into `powers_dbm` of the highest power (first one on ties).
    pub fn max_power_index(&self) -> usize {
        let max = self.max_power_dbm();
        self.powers_dbm.iter().position(|&p| p == max).unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    /// Loss at 1 m.
    pub pl0_db: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Average spacing between obstacles.
    pub d_obs_m: f64,
    /// Noise floor.
    pub noise_dbm: f64,
    pub bandwidth_mhz: f64,
    /// Extra attenuation applied per channel of separation.
    pub leakage_db_per_channel: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            pl0_db: 5.0,
            alpha: 4.0,
            d_obs_m: 5.0,
            noise_dbm: -100.0,
            bandwidth_mhz: 20.0,
            leakage_db_per_channel: 20.0,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_mhz > 0.0) {
            return Err(Error::Config("bandwidth must be positive".into()));
        }
        if !(self.leakage_db_per_channel >= 0.0) {
            return Err(Error::Config("leakage step must be non-negative".into()));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::Config("path-loss exponent must be positive".into()));
        }
        if !(self.d_obs_m > 0.0) {
            return Err(Error::Config("obstacle spacing must be positive".into()));
        }
        if !self.pl0_db.is_finite() || !self.noise_dbm.is_finite() {
            return Err(Error::Config("PL0 and noise must be finite".into()));
        }
        Ok(())
    }
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// `0 mW` maps to `-inf dBm`.
pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Log-distance indoor path loss with shadowing and distance-scaled
/// obstacle loss.
pub fn path_loss_db(d_m: f64, g_s_db: f64, g_o_db: f64, params: &RadioParams) -> Result<f64> {
    if !(d_m > 0.0) {
        return Err(Error::NonPositiveDistance(d_m));
    }
    Ok(params.pl0_db + 10.0 * params.alpha * d_m.log10() + g_s_db + (d_m / params.d_obs_m) * g_o_db)
}

pub fn received_power_dbm(tx_dbm: f64, loss_db: f64) -> f64 {
    tx_dbm - loss_db
}

/// Total loss between every AP and every STA of a deployment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// `gain_db[i][j]`: loss from the AP of WN `i` to the STA of WN `j`.
    pub gain_db: Vec<Vec<f64>>,
}

impl LinkBudget {
    pub fn from_deployment(deployment: &Deployment, params: &RadioParams) -> Result<Self> {
        let n = deployment.wns.len();
        let mut gain_db = vec![vec![0.0; n]; n];
        for (i, row) in gain_db.iter_mut().enumerate() {
            for (j, g) in row.iter_mut().enumerate() {
                let d = distance(&deployment.wns[i].ap_position, &deployment.wns[j].sta_position);
                *g = path_loss_db(d, deployment.shadow_db[i][j], deployment.obstacle_db[i][j], params)?;
            }
        }
        Ok(LinkBudget { gain_db })
    }

    pub fn n_wns(&self) -> usize {
        self.gain_db.len()
    }
}

pub fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Interference at the STA of `target`, in dBm.
///
/// `profile[j]` is `None` for a WN that is not transmitting. Interferers on
/// other channels are attenuated by the leakage step per channel of
/// separation. With no interferers the result is `-inf` (0 mW).
pub fn interference_dbm(
    target: usize,
    profile: &[Option<Arm>],
    budget: &LinkBudget,
    params: &RadioParams,
) -> f64 {
    let own_channel = match profile[target] {
        Some(a) => a.channel,
        None => return f64::NEG_INFINITY,
    };
    let total_mw: f64 = profile
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != target)
        .filter_map(|(j, arm)| arm.map(|a| (j, a)))
        .map(|(j, a)| {
            let sep = a.channel.abs_diff(own_channel) as f64;
            let rx = received_power_dbm(a.tx_power_dbm, budget.gain_db[j][target]);
            dbm_to_mw(rx - params.leakage_db_per_channel * sep)
        })
        .sum();
    mw_to_dbm(total_mw)
}

/// Linear SINR. Any of the inputs may be `-inf` dBm.
pub fn sinr(p_rx_dbm: f64, i_dbm: f64, noise_dbm: f64) -> f64 {
    dbm_to_mw(p_rx_dbm) / (dbm_to_mw(i_dbm) + dbm_to_mw(noise_dbm))
}

/// Shannon capacity; MHz in, Mbps out.
pub fn throughput_mbps(sinr_linear: f64, bandwidth_mhz: f64) -> f64 {
    bandwidth_mhz * (1.0 + sinr_linear).log2()
}

/// Throughput of `wn` transmitting alone at `tx_dbm`.
pub fn optimal_throughput_mbps(wn: usize, budget: &LinkBudget, params: &RadioParams, tx_dbm: f64) -> f64 {
    let p_rx = received_power_dbm(tx_dbm, budget.gain_db[wn][wn]);
    throughput_mbps(sinr(p_rx, f64::NEG_INFINITY, params.noise_dbm), params.bandwidth_mhz)
}

pub fn reward(throughput_mbps: f64, optimal_mbps: f64) -> Result<f64> {
    if !(optimal_mbps > 0.0) {
        return Err(Error::NonPositiveOptimum(optimal_mbps));
    }
    let r = throughput_mbps / optimal_mbps;
    debug_assert!(r <= 1.0 + 1e-12, "reward {r} exceeds 1");
    Ok(r)
}

/// Fast evaluation of joint profiles.
///
/// Everything that does not depend on the profile is precomputed in linear
/// units, so an evaluation costs N² multiply-adds plus N logarithms.
#[derive(Debug, Clone)]
pub struct ProfileEvaluator {
    arms: ArmSpace,
    bandwidth_mhz: f64,
    noise_mw: f64,
    /// `tx_mw[p]` for power index `p`.
    tx_mw: Vec<f64>,
    /// `link_lin[j][i]`: linear attenuation from AP `j` to STA `i`.
    link_lin: Vec<Vec<f64>>,
    /// `leak_lin[s]`: linear leakage factor for `s` channels of separation.
    leak_lin: Vec<f64>,
    optimal_mbps: Vec<f64>,
}

impl ProfileEvaluator {
    pub fn new(budget: &LinkBudget, params: &RadioParams, arms: &ArmSpace) -> Result<Self> {
        let n = budget.n_wns();
        let mut ev = ProfileEvaluator {
            arms: arms.clone(),
            bandwidth_mhz: params.bandwidth_mhz,
            noise_mw: dbm_to_mw(params.noise_dbm),
            tx_mw: arms.powers_dbm.iter().map(|&p| dbm_to_mw(p)).collect(),
            link_lin: budget
                .gain_db
                .iter()
                .map(|row| row.iter().map(|&g| dbm_to_mw(-g)).collect())
                .collect(),
            leak_lin: (0..arms.channels)
                .map(|s| dbm_to_mw(-params.leakage_db_per_channel * s as f64))
                .collect(),
            optimal_mbps: Vec::new(),
        };
        // Same arithmetic as `throughput_of`, so no profile can beat it by an ulp.
        let top = arms.index(0, arms.max_power_index());
        let mut solo = vec![None; n];
        ev.optimal_mbps = (0..n)
            .map(|i| {
                solo[i] = Some(top);
                let g = ev.throughput_of(i, &solo);
                solo[i] = None;
                g
            })
            .collect();
        if let Some(&bad) = ev.optimal_mbps.iter().find(|&&g| !(g > 0.0)) {
            return Err(Error::NonPositiveOptimum(bad));
        }
        Ok(ev)
    }

    pub fn n_wns(&self) -> usize {
        self.optimal_mbps.len()
    }

    pub fn arms(&self) -> &ArmSpace {
        &self.arms
    }

    /// Normalization throughput of each WN (isolation, maximum power).
    pub fn optimal_mbps(&self) -> &[f64] {
        &self.optimal_mbps
    }

    /// Throughput of WN `i` under `profile` (arm indices, `None` = silent).
    pub fn throughput_of(&self, i: usize, profile: &[Option<usize>]) -> f64 {
        let Some(k) = profile[i] else { return 0.0 };
        let np = self.arms.powers_dbm.len();
        let (ci, pi) = (k / np, k % np);
        let signal = self.tx_mw[pi] * self.link_lin[i][i];
        let mut interference = 0.0;
        for (j, kj) in profile.iter().enumerate() {
            if j == i {
                continue;
            }
            if let Some(kj) = *kj {
                let (cj, pj) = (kj / np, kj % np);
                interference += self.tx_mw[pj] * self.link_lin[j][i] * self.leak_lin[cj.abs_diff(ci)];
            }
        }
        self.bandwidth_mhz * (1.0 + signal / (interference + self.noise_mw)).log2()
    }

    /// Throughput of every WN into `out`.
    pub fn throughputs_into(&self, profile: &[Option<usize>], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.throughput_of(i, profile);
        }
    }

    /// SINR of WN `i` against its isolation SNR at maximum power.
    pub fn sinr_and_snr_max(&self, i: usize, profile: &[Option<usize>]) -> (f64, f64) {
        let gamma = self.throughput_of(i, profile);
        let sinr = (gamma / self.bandwidth_mhz).exp2() - 1.0;
        let snr_max = (self.optimal_mbps[i] / self.bandwidth_mhz).exp2() - 1.0;
        (sinr, snr_max)
    }
}
