//! Seeded random-number helpers.
//!
//! Everything random in this crate flows through a ChaCha stream keyed by a
//! `u64`, so identical seeds give identical results on every platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// Stream keyed by `seed`.
pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample in `[lo, hi)`.
pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    rng.gen_range(lo..hi)
}

/// Derived stream for item `index` within a run keyed by `seed`, so
/// per-item results are independent of scheduling order.
pub fn substream(seed: u64, index: u64) -> SeededRng {
    seeded(seed ^ index)
}
