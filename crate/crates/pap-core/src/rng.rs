//! Seeded pseudo-random number generation with a frozen algorithm.
//!
//! Synthetic datasets are reference fixtures: the same seed must produce the
//! same bytes on every platform and in every future release. General-purpose
//! RNG crates do not promise stream stability across major versions, so the
//! generator is pinned here instead.
//!
//! The algorithm is SplitMix64 (Steele, Lea & Flood, "Fast splittable
//! pseudorandom number generators", OOPSLA 2014), with the standard constants:
//!
//! ```text
//! state    += 0x9E3779B97F4A7C15          (golden gamma)
//! z         = state
//! z         = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z         = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output    = z ^ (z >> 31)
//! ```
//!
//! This definition is frozen. Any change would invalidate golden files and
//! must be shipped as a new, differently named generator.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 finalizer. Deterministic bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent child seed for a parallel substream.
///
/// `derive_seed(seed, i) = mix64(seed ^ mix64(i ^ 0x6A09E667F3BCC909))`. The
/// xor constant is the fractional part of sqrt(2); it keeps stream 0 distinct
/// from the root seed. Videos generated from `derive_seed(seed, video_index)`
/// are independent of one another and of generation order.
#[inline]
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed ^ mix64(stream ^ 0x6A09_E667_F3BC_C909))
}

/// SplitMix64 generator state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform `f64` in `[0, 1)` from the top 53 bits of one output.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)` via Lemire's multiply-shift.
    ///
    /// The small modulo bias (< 2^-64 per value for desk-scale `n`) is
    /// irrelevant for label sampling and accepted in exchange for consuming
    /// exactly one stream value per draw.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform `f64` in `[lo, hi)`.
    #[inline]
    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }

    /// Bernoulli draw: true with probability `p`.
    ///
    /// Compares one raw output against `round(p * 2^64)` so that `p = 0.0`
    /// is never true and `p = 1.0` is always true.
    #[inline]
    pub fn chance(&mut self, p: f64) -> bool {
        let threshold = (p * 18_446_744_073_709_551_616.0) as u128;
        (self.next_u64() as u128) < threshold
    }
}
