//! The learning loop.
//!
//! Iterations are 0-based. A WN is active from its activation iteration on;
//! before that it neither transmits nor learns. Every iteration logs one
//! record per WN.
//!
//! - Concurrent: every active WN selects, throughputs are computed once for
//!   the joint profile, every active WN updates with its own reward.
//! - Sequential: one active WN per iteration takes a turn, in ascending
//!   `wn_id` order with wrap-around. At its turn a WN first updates its
//!   previous arm with the mean reward collected since its last turn, then
//!   selects. Before its first turn it transmits on a default arm.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{Arm, ArmSpace, LinkBudget, ProfileEvaluator, RadioParams};
use crate::error::{Error, Result};
use crate::policy::{default_arm, Bandit, Policy, PolicyKind, PolicyParams};
use crate::rng::{self, SimRng, Stream};
use crate::scenario::Deployment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Concurrent,
    Sequential,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Concurrent => "concurrent",
            Mode::Sequential => "sequential",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "concurrent" => Ok(Mode::Concurrent),
            "sequential" => Ok(Mode::Sequential),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// A deployment together with everything derived from it that the loop
/// needs. Immutable once built.
#[derive(Debug, Clone)]
pub struct Environment {
    pub deployment: Deployment,
    pub radio: RadioParams,
    pub arms: ArmSpace,
    pub budget: LinkBudget,
    evaluator: ProfileEvaluator,
}

impl Environment {
    pub fn new(deployment: Deployment, radio: RadioParams, arms: ArmSpace) -> Result<Self> {
        radio.validate()?;
        arms.validate()?;
        let budget = LinkBudget::from_deployment(&deployment, &radio)?;
        let evaluator = ProfileEvaluator::new(&budget, &radio, &arms)?;
        Ok(Environment {
            deployment,
            radio,
            arms,
            budget,
            evaluator,
        })
    }

    pub fn n_wns(&self) -> usize {
        self.deployment.n_wns()
    }

    pub fn evaluator(&self) -> &ProfileEvaluator {
        &self.evaluator
    }

    /// Isolation throughput at maximum power, per WN.
    pub fn optimal_mbps(&self) -> &[f64] {
        self.evaluator.optimal_mbps()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub throughput_mbps: f64,
    /// `None` for a silent WN.
    pub reward: Option<f64>,
}

/// Throughput and reward of every WN for one joint profile (`None` = silent).
pub fn step_throughputs(env: &Environment, profile: &[Option<usize>]) -> Vec<StepOutcome> {
    let ev = env.evaluator();
    profile
        .iter()
        .enumerate()
        .map(|(i, k)| match k {
            Some(_) => {
                let g = ev.throughput_of(i, profile);
                StepOutcome {
                    throughput_mbps: g,
                    reward: Some(g / ev.optimal_mbps()[i]),
                }
            }
            None => StepOutcome {
                throughput_mbps: 0.0,
                reward: None,
            },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub wn_id: usize,
    /// Arm index; `None` while inactive.
    pub arm_index: Option<usize>,
    pub arm: Option<Arm>,
    pub active: bool,
    pub throughput_mbps: f64,
    pub reward: Option<f64>,
}

/// All records of one run, iteration-major: `records[t * n_wns + i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub n_wns: usize,
    pub iterations: usize,
    pub records: Vec<IterationRecord>,
}

impl Trace {
    pub fn get(&self, iteration: usize, wn: usize) -> &IterationRecord {
        &self.records[iteration * self.n_wns + wn]
    }

    pub fn iteration(&self, t: usize) -> &[IterationRecord] {
        &self.records[t * self.n_wns..(t + 1) * self.n_wns]
    }

    /// Arm indices played at iteration `t`.
    pub fn profile(&self, t: usize) -> Vec<Option<usize>> {
        self.iteration(t).iter().map(|r| r.arm_index).collect()
    }

    /// Sum of throughputs at iteration `t`.
    pub fn aggregate_mbps(&self, t: usize) -> f64 {
        self.iteration(t).iter().map(|r| r.throughput_mbps).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub trace: Trace,
    pub final_policies: Vec<Policy>,
    pub policy: PolicyKind,
    pub params: PolicyParams,
    pub mode: Mode,
    pub seed: u64,
}

pub fn run_concurrent(
    env: &Environment,
    policy: PolicyKind,
    params: &PolicyParams,
    iterations: usize,
    seed: u64,
) -> Result<RunResult> {
    run(env, Mode::Concurrent, policy, params, iterations, seed)
}

pub fn run_sequential(
    env: &Environment,
    policy: PolicyKind,
    params: &PolicyParams,
    iterations: usize,
    seed: u64,
) -> Result<RunResult> {
    run(env, Mode::Sequential, policy, params, iterations, seed)
}

pub fn run(
    env: &Environment,
    mode: Mode,
    policy: PolicyKind,
    params: &PolicyParams,
    iterations: usize,
    seed: u64,
) -> Result<RunResult> {
    params.validate()?;
    let mut rngs = policy_streams(env.n_wns(), seed);
    let policies: Vec<Policy> = rngs
        .iter_mut()
        .map(|r| Policy::new(policy, params, &env.arms, r))
        .collect();
    let (trace, final_policies) = simulate_with(env, mode, policies, &mut rngs, iterations, seed)?;
    Ok(RunResult {
        trace,
        final_policies,
        policy,
        params: params.clone(),
        mode,
        seed,
    })
}

/// One policy stream per WN.
pub fn policy_streams(n_wns: usize, seed: u64) -> Vec<SimRng> {
    (0..n_wns).map(|i| rng::stream(seed, Stream::Policy(i))).collect()
}

/// Runs arbitrary [`Bandit`]s; `rngs[i]` feeds WN `i`'s decisions.
pub fn simulate_with<P: Bandit>(
    env: &Environment,
    mode: Mode,
    mut policies: Vec<P>,
    rngs: &mut [SimRng],
    iterations: usize,
    seed: u64,
) -> Result<(Trace, Vec<P>)> {
    let n = env.n_wns();
    if iterations == 0 {
        return Err(Error::Config("at least one iteration is required".into()));
    }
    if policies.len() != n || rngs.len() != n {
        return Err(Error::Config(format!(
            "{} policies and {} streams for {n} WNs",
            policies.len(),
            rngs.len()
        )));
    }
    let mut records = Vec::with_capacity(iterations * n);
    match mode {
        Mode::Concurrent => concurrent_loop(env, &mut policies, rngs, iterations, &mut records),
        Mode::Sequential => sequential_loop(env, &mut policies, rngs, iterations, seed, &mut records),
    }
    Ok((
        Trace {
            n_wns: n,
            iterations,
            records,
        },
        policies,
    ))
}

fn push_records(
    env: &Environment,
    t: usize,
    profile: &[Option<usize>],
    outcomes: &[StepOutcome],
    records: &mut Vec<IterationRecord>,
) {
    for (i, (k, o)) in profile.iter().zip(outcomes).enumerate() {
        records.push(IterationRecord {
            iteration: t,
            wn_id: i,
            arm_index: *k,
            arm: k.map(|k| env.arms.arm(k)),
            active: k.is_some(),
            throughput_mbps: o.throughput_mbps,
            reward: o.reward,
        });
    }
}

fn concurrent_loop<P: Bandit>(
    env: &Environment,
    policies: &mut [P],
    rngs: &mut [SimRng],
    iterations: usize,
    records: &mut Vec<IterationRecord>,
) {
    let n = env.n_wns();
    let dep = &env.deployment;
    let mut profile = vec![None; n];
    for t in 0..iterations {
        for i in 0..n {
            profile[i] = dep
                .is_active(i, t)
                .then(|| policies[i].select(&mut rngs[i]));
        }
        let outcomes = step_throughputs(env, &profile);
        for i in 0..n {
            if let (Some(k), Some(r)) = (profile[i], outcomes[i].reward) {
                policies[i].update(k, r);
            }
        }
        push_records(env, t, &profile, &outcomes, records);
    }
}

/// Active WN following `last` in cyclic `wn_id` order.
fn next_turn(active: &[bool], last: Option<usize>) -> Option<usize> {
    let n = active.len();
    let start = last.map_or(0, |l| l + 1);
    (0..n).map(|s| (start + s) % n).find(|&i| active[i])
}

fn sequential_loop<P: Bandit>(
    env: &Environment,
    policies: &mut [P],
    rngs: &mut [SimRng],
    iterations: usize,
    seed: u64,
    records: &mut Vec<IterationRecord>,
) {
    let n = env.n_wns();
    let dep = &env.deployment;
    let mut current: Vec<usize> = (0..n)
        .map(|i| default_arm(&env.arms, &mut rng::stream(seed, Stream::InitialArm(i))))
        .collect();
    let mut has_selected = vec![false; n];
    let mut acc_sum = vec![0.0; n];
    let mut acc_n = vec![0usize; n];
    let mut last_turn = None;
    let mut active = vec![false; n];
    let mut profile = vec![None; n];

    let flush = |i: usize, p: &mut P, arm: usize, sum: &mut f64, cnt: &mut usize| {
        if *cnt > 0 {
            p.update(arm, *sum / *cnt as f64);
        }
        *sum = 0.0;
        *cnt = 0;
        let _ = i;
    };

    for t in 0..iterations {
        for i in 0..n {
            active[i] = dep.is_active(i, t);
        }
        if let Some(i) = next_turn(&active, last_turn) {
            if has_selected[i] {
                flush(i, &mut policies[i], current[i], &mut acc_sum[i], &mut acc_n[i]);
            } else {
                acc_sum[i] = 0.0;
                acc_n[i] = 0;
            }
            current[i] = policies[i].select(&mut rngs[i]);
            has_selected[i] = true;
            last_turn = Some(i);
        }
        for i in 0..n {
            profile[i] = active[i].then_some(current[i]);
        }
        let outcomes = step_throughputs(env, &profile);
        for i in 0..n {
            if let Some(r) = outcomes[i].reward {
                acc_sum[i] += r;
                acc_n[i] += 1;
            }
        }
        push_records(env, t, &profile, &outcomes, records);
    }
    // Rewards collected after the last turn still count for the final state.
    for i in 0..n {
        if has_selected[i] {
            flush(i, &mut policies[i], current[i], &mut acc_sum[i], &mut acc_n[i]);
        }
    }
}
