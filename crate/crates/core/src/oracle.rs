//! Exhaustive baselines and hindsight regret.
//!
//! Profiles are numbered in base K with WN 0 as the most significant digit,
//! so numeric order equals lexicographic order of the arm vector. Among
//! equally good profiles the lexicographically smallest one wins.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Arm;
use crate::error::{Error, Result};
use crate::rng::{self, Stream};
use crate::sim::{Environment, Trace};

pub const DEFAULT_PROFILE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    /// Maximize `Σ ln Γ_i`.
    ProportionalFair,
    /// Maximize `Σ Γ_i`.
    MaxAggregate,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::ProportionalFair => "proportional_fair",
            Objective::MaxAggregate => "max_aggregate",
        }
    }

    /// Objective of a throughput vector; `-inf` when PF meets a zero.
    pub fn value(self, throughputs: &[f64]) -> f64 {
        match self {
            Objective::ProportionalFair => {
                if throughputs.iter().any(|&g| !(g > 0.0)) {
                    f64::NEG_INFINITY
                } else {
                    throughputs.iter().map(|g| g.ln()).sum()
                }
            }
            Objective::MaxAggregate => throughputs.iter().sum(),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proportional_fair" | "pf" => Ok(Objective::ProportionalFair),
            "max_aggregate" | "aggregate" => Ok(Objective::MaxAggregate),
            other => Err(Error::Config(format!("unknown objective `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub objective: Objective,
    pub best_indices: Vec<usize>,
    pub best_profile: Vec<Arm>,
    /// ln-Mbps sum for PF, Mbps for max-aggregate.
    pub objective_value: f64,
    pub per_wn_throughput: Vec<f64>,
    pub aggregate_mbps: f64,
    pub profiles_evaluated: u64,
}

/// Order in which [`brute_force_ordered`] walks the profile space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationOrder {
    Lexicographic,
    Reverse,
    /// `index = (i * stride) mod K^N`; `stride` must be coprime with K^N.
    Strided(u64),
}

fn decode(mut index: u64, k: u64, out: &mut [Option<usize>]) {
    for slot in out.iter_mut().rev() {
        *slot = Some((index % k) as usize);
        index /= k;
    }
}

fn profile_count(env: &Environment) -> f64 {
    (env.arms.len() as f64).powi(env.n_wns() as i32)
}

fn check_cap(env: &Environment, cap: u64) -> Result<u64> {
    let total = profile_count(env);
    if total > cap as f64 {
        return Err(Error::SearchTooLarge { profiles: total, cap });
    }
    Ok(total as u64)
}

/// Better-than under the tie rule.
fn beats(value: f64, index: u64, best: Option<(f64, u64)>) -> bool {
    match best {
        None => value > f64::NEG_INFINITY,
        Some((bv, bi)) => value > bv || (value == bv && index < bi),
    }
}

fn evaluate_range(env: &Environment, objective: Objective, indices: impl Iterator<Item = u64>) -> Option<(f64, u64)> {
    let n = env.n_wns();
    let k = env.arms.len() as u64;
    let ev = env.evaluator();
    let mut profile = vec![None; n];
    let mut tpt = vec![0.0; n];
    let mut best = None;
    for idx in indices {
        decode(idx, k, &mut profile);
        ev.throughputs_into(&profile, &mut tpt);
        let v = objective.value(&tpt);
        if beats(v, idx, best) {
            best = Some((v, idx));
        }
    }
    best
}

fn finish(env: &Environment, objective: Objective, best: Option<(f64, u64)>, evaluated: u64) -> Result<OracleResult> {
    let (value, idx) = best.ok_or_else(|| Error::Config("no profile has a finite objective".into()))?;
    let n = env.n_wns();
    let mut profile = vec![None; n];
    decode(idx, env.arms.len() as u64, &mut profile);
    let mut tpt = vec![0.0; n];
    env.evaluator().throughputs_into(&profile, &mut tpt);
    let best_indices: Vec<usize> = profile.iter().map(|k| k.unwrap()).collect();
    Ok(OracleResult {
        objective,
        best_profile: best_indices.iter().map(|&k| env.arms.arm(k)).collect(),
        best_indices,
        objective_value: value,
        aggregate_mbps: tpt.iter().sum(),
        per_wn_throughput: tpt,
        profiles_evaluated: evaluated,
    })
}

/// Exhaustive search over all K^N joint profiles, every WN active.
///
/// Chunks are evaluated in parallel and merged with the tie rule, so the
/// result does not depend on scheduling.
pub fn brute_force(env: &Environment, objective: Objective, cap: u64) -> Result<OracleResult> {
    let total = check_cap(env, cap)?;
    const CHUNK: u64 = 4096;
    let chunks = total.div_ceil(CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| evaluate_range(env, objective, c * CHUNK..((c + 1) * CHUNK).min(total)))
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) | (x, None) => x,
                (Some(x), Some(y)) => Some(if beats(y.0, y.1, Some(x)) { y } else { x }),
            },
        );
    finish(env, objective, best, total)
}

/// Serial exhaustive search in a chosen order.
pub fn brute_force_ordered(
    env: &Environment,
    objective: Objective,
    order: EnumerationOrder,
    cap: u64,
) -> Result<OracleResult> {
    let total = check_cap(env, cap)?;
    let best = match order {
        EnumerationOrder::Lexicographic => evaluate_range(env, objective, 0..total),
        EnumerationOrder::Reverse => evaluate_range(env, objective, (0..total).rev()),
        EnumerationOrder::Strided(stride) => {
            if gcd(stride % total.max(1), total) != 1 {
                return Err(Error::Config(format!("stride {stride} is not coprime with {total}")));
            }
            let s = stride % total;
            evaluate_range(
                env,
                objective,
                (0..total).map(move |i| ((i as u128 * s as u128) % total as u128) as u64),
            )
        }
    };
    finish(env, objective, best, total)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Best of `samples` uniformly random profiles, for deployments too large
/// to enumerate.
pub fn sample_best(env: &Environment, objective: Objective, samples: u64, seed: u64) -> Result<OracleResult> {
    let n = env.n_wns();
    let k = env.arms.len();
    let mut rng = rng::stream(seed, Stream::Geometry);
    let ev = env.evaluator();
    let mut profile = vec![None; n];
    let mut tpt = vec![0.0; n];
    let mut best = None;
    for _ in 0..samples {
        let mut idx = 0u64;
        for slot in profile.iter_mut() {
            let a = rng.random_range(0..k);
            *slot = Some(a);
            idx = idx * k as u64 + a as u64;
        }
        ev.throughputs_into(&profile, &mut tpt);
        let v = objective.value(&tpt);
        if beats(v, idx, best) {
            best = Some((v, idx));
        }
    }
    finish(env, objective, best, samples)
}

/// Objective of one explicit profile (arm indices, all active).
pub fn profile_value(env: &Environment, objective: Objective, profile: &[usize]) -> f64 {
    let prof: Vec<Option<usize>> = profile.iter().map(|&k| Some(k)).collect();
    let mut tpt = vec![0.0; prof.len()];
    env.evaluator().throughputs_into(&prof, &mut tpt);
    objective.value(&tpt)
}

/// Hindsight regret of one WN against its best fixed arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretCurve {
    pub wn_id: usize,
    pub best_arm: usize,
    /// `cumulative[t]` is the regret after iterations `0..=t`.
    pub cumulative: Vec<f64>,
}

impl RegretCurve {
    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

/// For each WN, replays every fixed arm against the logged actions of the
/// others and measures the gap to the best one. Iterations in which the WN
/// is inactive add nothing.
pub fn empirical_regret(trace: &Trace, env: &Environment) -> Vec<RegretCurve> {
    let n = trace.n_wns;
    let k = env.arms.len();
    let ev = env.evaluator();
    let opt = env.optimal_mbps();
    (0..n)
        .map(|i| {
            // replay[a][t]: reward of fixed arm a at iteration t
            let mut replay = vec![vec![0.0; trace.iterations]; k];
            let mut logged = vec![0.0; trace.iterations];
            for t in 0..trace.iterations {
                let rec = trace.get(t, i);
                if !rec.active {
                    continue;
                }
                logged[t] = rec.reward.unwrap_or(0.0);
                let mut prof = trace.profile(t);
                for (a, row) in replay.iter_mut().enumerate() {
                    prof[i] = Some(a);
                    row[t] = ev.throughput_of(i, &prof) / opt[i];
                }
            }
            let totals: Vec<f64> = replay.iter().map(|r| r.iter().sum()).collect();
            let mut best_arm = 0;
            for a in 1..k {
                if totals[a] > totals[best_arm] {
                    best_arm = a;
                }
            }
            let mut acc = 0.0;
            let cumulative = (0..trace.iterations)
                .map(|t| {
                    acc += replay[best_arm][t] - logged[t];
                    acc
                })
                .collect();
            RegretCurve {
                wn_id: i,
                best_arm,
                cumulative,
            }
        })
        .collect()
}

/// Writes `key=value` lines; floats use the shortest exact representation.
pub fn write_kv<W: Write>(result: &OracleResult, mut out: W) -> Result<()> {
    writeln!(out, "objective={}", result.objective)?;
    writeln!(out, "objective_value={}", result.objective_value)?;
    writeln!(out, "aggregate_mbps={}", result.aggregate_mbps)?;
    writeln!(out, "profiles_evaluated={}", result.profiles_evaluated)?;
    writeln!(out, "n_wns={}", result.best_indices.len())?;
    for (i, (arm, g)) in result.best_profile.iter().zip(&result.per_wn_throughput).enumerate() {
        writeln!(out, "wn.{i}.arm={}", result.best_indices[i])?;
        writeln!(out, "wn.{i}.channel={}", arm.channel)?;
        writeln!(out, "wn.{i}.tx_power_dbm={}", arm.tx_power_dbm)?;
        writeln!(out, "wn.{i}.throughput_mbps={g}")?;
    }
    Ok(())
}

pub fn read_kv<R: BufRead>(input: R) -> Result<OracleResult> {
    let mut map = BTreeMap::new();
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("not a key=value line: `{line}`")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get = |k: &str| -> Result<&String> {
        map.get(k).ok_or_else(|| Error::Config(format!("oracle file lacks `{k}`")))
    };
    fn num<T: FromStr>(key: &str, s: &str) -> Result<T> {
        s.parse().map_err(|_| Error::Config(format!("bad value for `{key}`: `{s}`")))
    }
    let n: usize = num("n_wns", get("n_wns")?)?;
    let mut best_indices = Vec::with_capacity(n);
    let mut best_profile = Vec::with_capacity(n);
    let mut per_wn = Vec::with_capacity(n);
    for i in 0..n {
        let key = |f: &str| format!("wn.{i}.{f}");
        best_indices.push(num(&key("arm"), get(&key("arm"))?)?);
        best_profile.push(Arm {
            channel: num(&key("channel"), get(&key("channel"))?)?,
            tx_power_dbm: num(&key("tx_power_dbm"), get(&key("tx_power_dbm"))?)?,
        });
        per_wn.push(num(&key("throughput_mbps"), get(&key("throughput_mbps"))?)?);
    }
    Ok(OracleResult {
        objective: get("objective")?.parse()?,
        best_indices,
        best_profile,
        objective_value: num("objective_value", get("objective_value")?)?,
        per_wn_throughput: per_wn,
        aggregate_mbps: num("aggregate_mbps", get("aggregate_mbps")?)?,
        profiles_evaluated: num("profiles_evaluated", get("profiles_evaluated")?)?,
    })
}
