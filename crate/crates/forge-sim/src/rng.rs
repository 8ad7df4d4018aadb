//! Seeded random stream shared by every sampler in the simulator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The simulator's random stream: ChaCha8 seeded from a 64-bit value.
///
/// Every random quantity in a run comes from a single instance of this
/// stream in a documented order (see [`crate::engine`]), which is what makes
/// runs bit-reproducible across platforms.
#[derive(Debug, Clone)]
pub struct SimRng(ChaCha8Rng);

impl SimRng {
    pub fn from_seed(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Next variate, uniform on [0, 1) with 53-bit precision.
    pub fn next_unit(&mut self) -> f64 {
        self.0.gen::<f64>()
    }

    /// Uniform index in `0..n`, computed as `floor(u * n)` clamped to `n - 1`.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0, "next_index needs a non-empty range");
        let idx = (self.next_unit() * n as f64) as usize;
        idx.min(n - 1)
    }
}
