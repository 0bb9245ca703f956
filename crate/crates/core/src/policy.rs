//! Action-selection strategies over the K arms of an [`ArmSpace`].
//!
//! All learners follow the same loop: `select` an arm, observe a reward in
//! `[0, 1]`, `update`. Argmax ties always go to the lowest arm index.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::channel::ArmSpace;
use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Uniform select/update interface driven by the simulation loop.
pub trait Bandit {
    fn select(&mut self, rng: &mut SimRng) -> usize;
    fn update(&mut self, arm: usize, reward: f64);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolicyKind {
    EGreedy,
    Exp3,
    Ucb,
    Thompson,
    Static,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::EGreedy,
        PolicyKind::Exp3,
        PolicyKind::Ucb,
        PolicyKind::Thompson,
        PolicyKind::Static,
    ];

    pub const LEARNING: [PolicyKind; 4] = [
        PolicyKind::EGreedy,
        PolicyKind::Exp3,
        PolicyKind::Ucb,
        PolicyKind::Thompson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::EGreedy => "egreedy",
            PolicyKind::Exp3 => "exp3",
            PolicyKind::Ucb => "ucb",
            PolicyKind::Thompson => "thompson",
            PolicyKind::Static => "static",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "egreedy" | "e-greedy" | "epsilon-greedy" => Ok(PolicyKind::EGreedy),
            "exp3" => Ok(PolicyKind::Exp3),
            "ucb" => Ok(PolicyKind::Ucb),
            "thompson" | "ts" => Ok(PolicyKind::Thompson),
            "static" => Ok(PolicyKind::Static),
            other => Err(Error::Config(format!("unknown policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    /// Initial exploration rate of ε-greedy.
    pub eps0: f64,
    /// Decay ε as `eps0 / sqrt(t)`; off gives a constant rate.
    pub eps_decay: bool,
    /// Initial EXP3 learning rate.
    pub eta0: f64,
    /// EXP3 uniform-mixing weight.
    pub gamma: f64,
    /// Divide the EXP3 exponent by K (textbook variant) instead of the
    /// rescaled-weights update.
    pub exp3_divide_by_k: bool,
    /// Use `max(t, 2)` inside the UCB logarithm.
    pub ucb_log_floor: bool,
}

impl Default for PolicyParams {
    fn default() -> Self {
        PolicyParams {
            eps0: 1.0,
            eps_decay: true,
            eta0: 0.1,
            gamma: 0.0,
            exp3_divide_by_k: false,
            ucb_log_floor: true,
        }
    }
}

impl PolicyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps0 >= 0.0) {
            return Err(Error::Config("eps0 must be non-negative".into()));
        }
        if !(self.eta0 >= 0.0) || !self.eta0.is_finite() {
            return Err(Error::Config("eta0 must be a non-negative number".into()));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Config("gamma must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Index of the largest value; the first one wins ties.
fn argmax(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (k, v) in values.into_iter().enumerate() {
        if v > best_v {
            best = k;
            best_v = v;
        }
    }
    best
}

// ---------------------------------------------------------------------------

/// ε-greedy with `ε_t = ε_0 / sqrt(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EGreedy {
    pub eps0: f64,
    pub decay: bool,
    /// Decisions taken so far.
    pub t: u64,
    pub counts: Vec<u64>,
    pub means: Vec<f64>,
    /// Whether the last decision took the random branch.
    pub last_explored: bool,
}

impl EGreedy {
    pub fn new(k: usize, eps0: f64, decay: bool) -> Self {
        EGreedy {
            eps0,
            decay,
            t: 0,
            counts: vec![0; k],
            means: vec![0.0; k],
            last_explored: false,
        }
    }

    /// Exploration probability at decision `t` (1-based).
    pub fn epsilon(&self, t: u64) -> f64 {
        let e = if self.decay { self.eps0 / (t.max(1) as f64).sqrt() } else { self.eps0 };
        e.min(1.0)
    }
}

impl Bandit for EGreedy {
    fn select(&mut self, rng: &mut SimRng) -> usize {
        self.t += 1;
        let eps = self.epsilon(self.t);
        let k = self.means.len();
        // Both draws are always taken so the stream position only depends on t.
        let coin: f64 = rng.random();
        let uniform = rng.random_range(0..k);
        self.last_explored = coin < eps;
        if self.last_explored {
            uniform
        } else {
            argmax(self.means.iter().copied())
        }
    }

    fn update(&mut self, arm: usize, reward: f64) {
        self.counts[arm] += 1;
        self.means[arm] += (reward - self.means[arm]) / self.counts[arm] as f64;
    }
}

// ---------------------------------------------------------------------------

/// EXP3 with a decaying learning rate `η_t = η_0 / sqrt(t)`.
///
/// Weights are kept as logarithms. Each update raises every weight to the
/// power `η_t / η_{t-1}` and multiplies the played arm's weight by
/// `exp(η_t · r / p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exp3 {
    pub eta0: f64,
    pub gamma: f64,
    pub divide_by_k: bool,
    pub t: u64,
    pub log_weights: Vec<f64>,
    /// Learning rate used by the previous update.
    pub eta_prev: f64,
    /// Arm and probability of the last draw.
    pub last_draw: Option<(usize, f64)>,
}

impl Exp3 {
    pub fn new(k: usize, eta0: f64, gamma: f64, divide_by_k: bool) -> Self {
        Exp3 {
            eta0,
            gamma,
            divide_by_k,
            t: 0,
            log_weights: vec![0.0; k],
            eta_prev: eta0,
            last_draw: None,
        }
    }

    pub fn eta(&self, t: u64) -> f64 {
        self.eta0 / (t.max(1) as f64).sqrt()
    }

    /// `p_k = (1-γ) w_k / Σw + γ/K`.
    pub fn probabilities(&self) -> Vec<f64> {
        let k = self.log_weights.len() as f64;
        let max = self.log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = self.log_weights.iter().map(|&l| (l - max).exp()).collect();
        let total: f64 = w.iter().sum();
        w.iter()
            .map(|&wi| (1.0 - self.gamma) * wi / total + self.gamma / k)
            .collect()
    }

    /// Draws an arm; returns it with the probability it was drawn with.
    pub fn select_with_prob(&mut self, rng: &mut SimRng) -> (usize, f64) {
        self.t += 1;
        let p = self.probabilities();
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = None;
        for (k, &pk) in p.iter().enumerate() {
            if pk <= 0.0 {
                continue;
            }
            acc += pk;
            if u < acc {
                chosen = Some(k);
                break;
            }
        }
        // Rounding can leave acc a hair below u: take the last arm with mass.
        let k = chosen.unwrap_or_else(|| p.iter().rposition(|&x| x > 0.0).unwrap());
        self.last_draw = Some((k, p[k]));
        (k, p[k])
    }

    pub fn update_with_prob(&mut self, arm: usize, reward: f64, p_selected: f64) {
        assert!(p_selected > 0.0, "EXP3 update needs a positive probability");
        let eta = self.eta(self.t);
        let ratio = if self.eta_prev > 0.0 { eta / self.eta_prev } else { 1.0 };
        let estimate = reward / p_selected;
        let step = if self.divide_by_k {
            eta * estimate / self.log_weights.len() as f64
        } else {
            eta * estimate
        };
        for lw in &mut self.log_weights {
            *lw *= ratio;
        }
        self.log_weights[arm] += step;
        self.eta_prev = eta;
    }
}

impl Bandit for Exp3 {
    fn select(&mut self, rng: &mut SimRng) -> usize {
        self.select_with_prob(rng).0
    }

    fn update(&mut self, arm: usize, reward: f64) {
        let p = match self.last_draw {
            Some((k, p)) if k == arm => p,
            _ => self.probabilities()[arm],
        };
        self.update_with_prob(arm, reward, p);
    }
}

// ---------------------------------------------------------------------------

/// UCB1: one initial play of every arm in index order, then the arm
/// maximizing `mean + sqrt(2 ln t / n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ucb {
    /// Post-initialization decisions taken so far.
    pub t: u64,
    pub counts: Vec<u64>,
    pub means: Vec<f64>,
    /// Next arm of the initial sweep.
    pub init_next: usize,
    pub log_floor: bool,
}

/// Optimistic index of an arm played `n` times with mean `mean`.
pub fn ucb_index(mean: f64, n: u64, t: f64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    mean + (2.0 * t.ln() / n as f64).sqrt()
}

impl Ucb {
    pub fn new(k: usize, log_floor: bool) -> Self {
        Ucb {
            t: 0,
            counts: vec![0; k],
            means: vec![0.0; k],
            init_next: 0,
            log_floor,
        }
    }

    pub fn in_init(&self) -> bool {
        self.init_next < self.counts.len()
    }

    pub fn indices(&self, t: u64) -> Vec<f64> {
        let t = if self.log_floor { t.max(2) } else { t.max(1) } as f64;
        self.means
            .iter()
            .zip(&self.counts)
            .map(|(&m, &n)| ucb_index(m, n, t))
            .collect()
    }

    pub fn select_arm(&mut self) -> usize {
        if self.in_init() {
            let k = self.init_next;
            self.init_next += 1;
            return k;
        }
        self.t += 1;
        argmax(self.indices(self.t))
    }
}

impl Bandit for Ucb {
    fn select(&mut self, _rng: &mut SimRng) -> usize {
        self.select_arm()
    }

    fn update(&mut self, arm: usize, reward: f64) {
        self.counts[arm] += 1;
        self.means[arm] += (reward - self.means[arm]) / self.counts[arm] as f64;
    }
}

// ---------------------------------------------------------------------------

/// Gaussian Thompson sampling with a standard normal prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thompson {
    pub means: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Thompson {
    pub fn new(k: usize) -> Self {
        Thompson {
            means: vec![0.0; k],
            counts: vec![0; k],
        }
    }

    /// Posterior variance `1 / (n + 1)`.
    pub fn variance(&self, arm: usize) -> f64 {
        1.0 / (self.counts[arm] as f64 + 1.0)
    }
}

impl Bandit for Thompson {
    fn select(&mut self, rng: &mut SimRng) -> usize {
        let samples: Vec<f64> = (0..self.means.len())
            .map(|k| {
                let z: f64 = StandardNormal.sample(rng);
                self.means[k] + self.variance(k).sqrt() * z
            })
            .collect();
        argmax(samples)
    }

    fn update(&mut self, arm: usize, reward: f64) {
        let n = self.counts[arm] as f64;
        self.means[arm] = (self.means[arm] * n + reward) / (n + 2.0);
        self.counts[arm] += 1;
    }
}

// ---------------------------------------------------------------------------

/// Non-learning baseline: a uniformly drawn channel at the highest power,
/// kept forever.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticArm {
    pub arm: usize,
}

impl StaticArm {
    pub fn new(arms: &ArmSpace, rng: &mut SimRng) -> Self {
        StaticArm { arm: default_arm(arms, rng) }
    }
}

/// Arm of a WN that is not (yet) learning: uniform channel, maximum power.
pub fn default_arm(arms: &ArmSpace, rng: &mut SimRng) -> usize {
    let channel = rng.random_range(0..arms.channels);
    arms.index(channel, arms.max_power_index())
}

impl Bandit for StaticArm {
    fn select(&mut self, _rng: &mut SimRng) -> usize {
        self.arm
    }

    fn update(&mut self, _arm: usize, _reward: f64) {}
}

// ---------------------------------------------------------------------------

/// Per-WN learner state, one variant per strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Policy {
    EGreedy(EGreedy),
    Exp3(Exp3),
    Ucb(Ucb),
    Thompson(Thompson),
    Static(StaticArm),
}

impl Policy {
    /// Fresh state. Only the static baseline consumes randomness here.
    pub fn new(kind: PolicyKind, params: &PolicyParams, arms: &ArmSpace, rng: &mut SimRng) -> Self {
        let k = arms.len();
        match kind {
            PolicyKind::EGreedy => Policy::EGreedy(EGreedy::new(k, params.eps0, params.eps_decay)),
            PolicyKind::Exp3 => Policy::Exp3(Exp3::new(k, params.eta0, params.gamma, params.exp3_divide_by_k)),
            PolicyKind::Ucb => Policy::Ucb(Ucb::new(k, params.ucb_log_floor)),
            PolicyKind::Thompson => Policy::Thompson(Thompson::new(k)),
            PolicyKind::Static => Policy::Static(StaticArm::new(arms, rng)),
        }
    }

    pub fn kind(&self) -> PolicyKind {
        match self {
            Policy::EGreedy(_) => PolicyKind::EGreedy,
            Policy::Exp3(_) => PolicyKind::Exp3,
            Policy::Ucb(_) => PolicyKind::Ucb,
            Policy::Thompson(_) => PolicyKind::Thompson,
            Policy::Static(_) => PolicyKind::Static,
        }
    }
}

impl Bandit for Policy {
    fn select(&mut self, rng: &mut SimRng) -> usize {
        match self {
            Policy::EGreedy(p) => p.select(rng),
            Policy::Exp3(p) => p.select(rng),
            Policy::Ucb(p) => p.select(rng),
            Policy::Thompson(p) => p.select(rng),
            Policy::Static(p) => p.select(rng),
        }
    }

    fn update(&mut self, arm: usize, reward: f64) {
        match self {
            Policy::EGreedy(p) => p.update(arm, reward),
            Policy::Exp3(p) => p.update(arm, reward),
            Policy::Ucb(p) => p.update(arm, reward),
            Policy::Thompson(p) => p.update(arm, reward),
            Policy::Static(p) => p.update(arm, reward),
        }
    }
}
