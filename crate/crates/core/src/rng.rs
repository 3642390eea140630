//! Counter-addressable uniform stream for the walk engine.
//!
//! Each walker owns an independent ChaCha20 stream (stream id = walker
//! index) under a key derived from the run seed. Draw `(step, channel)`
//! lives at a fixed word offset, so any variate can be regenerated in
//! isolation and results never depend on scheduling.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Which variate of a step is being drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Wait = 0,
    Jump = 1,
}

/// Map 64 random bits to the open interval `(0, 1)`.
pub fn uniform_from_bits(x: u64) -> f64 {
    // 52 bits keep the half-offset exact: the largest value is 1 − 2^{−53}
    ((x >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Uniform stream of one walker.
#[derive(Clone)]
pub struct WalkerStream {
    rng: ChaCha20Rng,
}

impl WalkerStream {
    pub fn new(seed: u64, walker: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(walker);
        Self { rng }
    }

    /// Word position (in 32-bit words) of draw `(step, channel)`.
    fn word_pos(step: u64, channel: Channel) -> u128 {
        2 * (2 * step as u128 + channel as u128)
    }

    /// Random access to the uniform for `(step, channel)`, `step ≥ 0`.
    pub fn at(&mut self, step: u64, channel: Channel) -> f64 {
        self.rng.set_word_pos(Self::word_pos(step, channel));
        uniform_from_bits(self.rng.next_u64())
    }

    /// Next uniform in sequence: wait of step 0, jump of step 0, wait of
    /// step 1, ...
    pub fn next_uniform(&mut self) -> f64 {
        uniform_from_bits(self.rng.next_u64())
    }
}
