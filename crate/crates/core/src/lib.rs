//! Decentralized spatial reuse for dense wireless deployments.
//!
//! Each wireless network (WN, one AP serving one STA) runs a multi-armed
//! bandit over (channel, transmit power) configurations and is rewarded with
//! its throughput normalized by the throughput it would get in isolation.
//! The crate provides:
//!
//! - [`scenario`]: grid, random and dynamic-activation deployments, fully
//!   determined by a seed.
//! - [`channel`]: log-distance path loss, adjacent-channel leakage, SINR,
//!   Shannon throughput and the normalized reward.
//! - [`policy`]: ε-greedy, EXP3, UCB, Thompson sampling and a static
//!   (non-learning) baseline behind one select/update interface.
//! - [`sim`]: concurrent and sequential (round-robin) learning loops.
//! - [`oracle`]: exhaustive proportional-fair / max-aggregate optima and
//!   hindsight regret.
//! - [`harness`]: experiment configuration, repetitions, interval summaries
//!   and CSV output, used by the `srsim` binary.

pub mod channel;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod policy;
pub mod rng;
pub mod scenario;
pub mod sim;

pub use channel::{Arm, ArmSpace, LinkBudget, RadioParams};
pub use error::{Error, Result};
pub use oracle::{Objective, OracleResult};
pub use policy::{Policy, PolicyKind, PolicyParams};
pub use scenario::{Deployment, ScenarioConfig, WnPlacement};
pub use sim::{Environment, IterationRecord, Mode, RunResult};
