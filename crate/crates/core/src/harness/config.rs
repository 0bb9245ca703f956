//! Experiment configuration and its flat `key=value` file format.
//!
//! Keys match the CLI flag names without the leading dashes; `-` and `_`
//! are interchangeable. Blank lines and `#` comments are ignored.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{ArmSpace, RadioParams};
use crate::error::{Error, Result};
use crate::policy::{PolicyKind, PolicyParams};
use crate::scenario::ScenarioConfig;
use crate::sim::Mode;

use super::stats::{default_intervals, validate_intervals, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    Grid,
    Random,
    Dynamic,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Grid => "grid",
            ScenarioKind::Random => "random",
            ScenarioKind::Dynamic => "dynamic",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grid" => Ok(ScenarioKind::Grid),
            "random" => Ok(ScenarioKind::Random),
            "dynamic" => Ok(ScenarioKind::Dynamic),
            other => Err(Error::Config(format!("unknown scenario `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: ScenarioKind,
    pub n_wns: usize,
    pub policy: PolicyKind,
    pub mode: Mode,
    pub iterations: usize,
    pub reps: usize,
    pub seed: u64,
    pub policy_params: PolicyParams,
    pub radio: RadioParams,
    pub arms: ArmSpace,
    /// Geometry and channel-randomness knobs; its `seed`, `n_wns` and
    /// `total_iterations` are overwritten per repetition.
    pub geometry: ScenarioConfig,
    /// `None` means the default intervals clipped to `iterations`.
    pub intervals: Option<Vec<Interval>>,
    pub out: PathBuf,
    pub trace: bool,
    pub oracle: bool,
    pub histogram: bool,
    /// Run repetitions on the rayon pool.
    pub parallel: bool,
    /// Values for a tuning sweep; `None` runs a plain experiment.
    pub sweep: Option<Vec<f64>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: ScenarioKind::Grid,
            n_wns: 4,
            policy: PolicyKind::Thompson,
            mode: Mode::Concurrent,
            iterations: 10_000,
            reps: 100,
            seed: 1,
            policy_params: PolicyParams::default(),
            radio: RadioParams::default(),
            arms: ArmSpace::default(),
            geometry: ScenarioConfig::default(),
            intervals: None,
            out: PathBuf::from("out"),
            trace: false,
            oracle: false,
            histogram: false,
            parallel: true,
            sweep: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::Config(format!("invalid boolean `{value}` for `{key}`"))),
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse(key, s))
        .collect()
}

/// `"1-100,101-500"` style interval lists.
pub fn parse_intervals(value: &str) -> Result<Vec<Interval>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            let (a, b) = part
                .trim()
                .split_once('-')
                .ok_or_else(|| Error::Config(format!("interval `{part}` is not of the form a-b")))?;
            Ok((parse("intervals", a)?, parse("intervals", b)?))
        })
        .collect()
}

/// `"0:1:0.1"` (start:end:step, inclusive) or an explicit comma list.
pub fn parse_sweep_values(value: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() == 3 {
        let (a, b, step): (f64, f64, f64) =
            (parse("sweep", parts[0])?, parse("sweep", parts[1])?, parse("sweep", parts[2])?);
        if !(step > 0.0) || b < a {
            return Err(Error::Config(format!("empty sweep range `{value}`")));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        // i * step rather than repeated addition keeps 0.3 from turning into 0.30000000000000004
        return Ok((0..=n).map(|i| ((a + i as f64 * step) * 1e9).round() / 1e9).collect());
    }
    parse_list("sweep", value)
}

impl ExperimentConfig {
    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().trim_start_matches("--").replace('-', "_");
        let k = key.as_str();
        let v = value.trim();
        match k {
            "scenario" => self.scenario = parse(k, v)?,
            "n_wns" => self.n_wns = parse(k, v)?,
            "policy" => self.policy = parse(k, v)?,
            "mode" => self.mode = parse(k, v)?,
            "iterations" => self.iterations = parse(k, v)?,
            "reps" | "repetitions" => self.reps = parse(k, v)?,
            "seed" => self.seed = parse(k, v)?,
            "eps0" => self.policy_params.eps0 = parse(k, v)?,
            "eps_decay" => self.policy_params.eps_decay = parse_bool(k, v)?,
            "eta0" => self.policy_params.eta0 = parse(k, v)?,
            "gamma" => self.policy_params.gamma = parse(k, v)?,
            "exp3_divide_by_k" => self.policy_params.exp3_divide_by_k = parse_bool(k, v)?,
            "ucb_log_floor" => self.policy_params.ucb_log_floor = parse_bool(k, v)?,
            "alpha" => self.radio.alpha = parse(k, v)?,
            "pl0_db" => self.radio.pl0_db = parse(k, v)?,
            "d_obs_m" => self.radio.d_obs_m = parse(k, v)?,
            "noise_dbm" => self.radio.noise_dbm = parse(k, v)?,
            "bandwidth_mhz" => self.radio.bandwidth_mhz = parse(k, v)?,
            "leakage_db" | "leakage_db_per_channel" => self.radio.leakage_db_per_channel = parse(k, v)?,
            "channels" => self.arms.channels = parse(k, v)?,
            "powers" | "powers_dbm" => self.arms.powers_dbm = parse_list(k, v)?,
            "shadow_sigma_db" => self.geometry.shadow_sigma_db = parse(k, v)?,
            "shadow_mean_db" => self.geometry.shadow_mean_db = parse(k, v)?,
            "obstacle_min_db" => self.geometry.obstacle_range_db.0 = parse(k, v)?,
            "obstacle_max_db" => self.geometry.obstacle_range_db.1 = parse(k, v)?,
            "ap_sta_distance_m" => self.geometry.ap_sta_distance_m = parse(k, v)?,
            "activations" => self.geometry.activation_iterations = parse_list(k, v)?,
            "intervals" => self.intervals = Some(parse_intervals(v)?),
            "out" => self.out = PathBuf::from(v),
            "trace" => self.trace = parse_bool(k, v)?,
            "oracle" => self.oracle = parse_bool(k, v)?,
            "histogram" => self.histogram = parse_bool(k, v)?,
            "parallel" => self.parallel = parse_bool(k, v)?,
            "sweep" => self.sweep = Some(parse_sweep_values(v)?),
            _ => return Err(Error::Config(format!("unknown key `{k}`"))),
        }
        Ok(())
    }

    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got `{line}`", no + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::Config(format!("line {}: {e}", no + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = ExperimentConfig::default();
        cfg.apply_str(&text)?;
        Ok(cfg)
    }

    pub fn intervals(&self) -> Vec<Interval> {
        self.intervals
            .clone()
            .unwrap_or_else(|| default_intervals(self.iterations))
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.n_wns == 0 {
            return Err(Error::Config("n-wns must be at least 1".into()));
        }
        if matches!(self.scenario, ScenarioKind::Grid | ScenarioKind::Dynamic) && self.n_wns != 4 {
            return Err(Error::Config(format!("the {} scenario has 4 WNs, got {}", self.scenario, self.n_wns)));
        }
        if self.sweep.is_some() {
            self.sweep_param()?;
        }
        self.policy_params.validate()?;
        self.radio.validate()?;
        self.arms.validate()?;
        self.geometry.validate()?;
        validate_intervals(&self.intervals(), self.iterations)
    }

    /// Parameter swept for the configured policy.
    pub fn sweep_param(&self) -> Result<&'static str> {
        match self.policy {
            PolicyKind::EGreedy => Ok("eps0"),
            PolicyKind::Exp3 => Ok("eta0"),
            other => Err(Error::Config(format!("tuning sweeps need egreedy or exp3, not {other}"))),
        }
    }

    /// Scenario configuration for a deployment built from `seed`.
    pub fn scenario_config(&self, seed: u64) -> ScenarioConfig {
        ScenarioConfig {
            n_wns: self.n_wns,
            total_iterations: self.iterations,
            seed,
            ..self.geometry.clone()
        }
    }
}
