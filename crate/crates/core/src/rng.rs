//! Counter-based splittable randomness.
//!
//! Every random decision in the samplers is drawn from a substream addressed
//! by a small integer key (step, color, level, position). The draw is a pure
//! function of (seed, key), so the same seed gives identical draws no matter
//! in which order, or on how many threads, the decisions are evaluated. This
//! is what lets the shuffle and the particle dynamics be coupled draw-for-draw
//! and compared bit-for-bit.

/// SplitMix64 finalizer; a well-mixed 64-bit permutation.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A keyed source of independent substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// State of the substream addressed by `key`.
    pub fn substream(&self, key: &[i64]) -> Substream {
        let mut state = mix(self.seed ^ 0x6a09_e667_f3bc_c908);
        for &k in key {
            state = mix(state ^ (k as u64));
        }
        Substream { state }
    }

    /// One uniform u64 from the keyed substream.
    pub fn draw_u64(&self, key: &[i64]) -> u64 {
        self.substream(key).next_u64()
    }

    /// One uniform sample in [0, 1) from the keyed substream.
    pub fn draw_unit(&self, key: &[i64]) -> f64 {
        self.substream(key).next_unit()
    }

    /// Bernoulli(p) from the keyed substream.
    pub fn draw_bernoulli(&self, key: &[i64], p: f64) -> bool {
        self.draw_unit(key) < p
    }
}

/// A sequential generator seeded from a substream key.
#[derive(Debug, Clone, Copy)]
pub struct Substream {
    state: u64,
}

impl Substream {
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        mix(self.state)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in 0..n.
    pub fn next_below(&mut self, n: u64) -> u64 {
        // Rejection-free multiply-shift; bias is negligible for the small n
        // used in tests.
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }
}
