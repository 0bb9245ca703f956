//! Seed splitting.
//!
//! Every random consumer gets its own ChaCha8 stream derived from a single
//! root seed: the key comes from the seed, the stream id names the
//! consumer. Changing what one consumer draws (e.g. swapping the policy)
//! never shifts the numbers another consumer sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Named stream ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// AP/STA placement.
    Geometry,
    /// Per-link shadowing and obstacle draws.
    Channel,
    /// Decisions of one WN's policy.
    Policy(usize),
    /// Arm a WN transmits on before its first sequential turn.
    InitialArm(usize),
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Geometry => 1,
            Stream::Channel => 2,
            Stream::Policy(wn) => (1 << 32) | wn as u64,
            Stream::InitialArm(wn) => (2 << 32) | wn as u64,
        }
    }
}

pub fn stream(seed: u64, which: Stream) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which.id());
    rng
}

/// Seed of repetition `rep` of an experiment rooted at `seed`.
pub fn repetition_seed(seed: u64, rep: usize) -> u64 {
    seed.wrapping_add(rep as u64)
}
