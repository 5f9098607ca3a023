//! Counter-based random streams.
//!
//! Every random quantity is a pure function of `(seed, stream, position)`:
//! stream `s` of seed `k` is the ChaCha8 keystream for key `k` and nonce `s`,
//! and position `p` is its `p`-th 64-bit word. Samples are assigned one
//! stream each, so they can be generated in any order or in parallel.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct CounterStream {
    inner: ChaCha8Rng,
}

impl CounterStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    /// Stream positioned at its `position`-th 64-bit word.
    pub fn at(seed: u64, stream: u64, position: u64) -> Self {
        let mut s = Self::new(seed, stream);
        s.inner.set_word_pos(u128::from(position) * 2);
        s
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform digit in `0..base`, one word per digit.
    ///
    /// Multiply-shift without rejection; the bias is below `base / 2^64`.
    pub fn next_digit(&mut self, base: u32) -> u32 {
        ((u128::from(self.next_u64()) * u128::from(base)) >> 64) as u32
    }

    /// Uniform double in `[0, 1)` with 53 random bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
