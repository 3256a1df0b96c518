//! Shared input generation for the benchmark targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic nonzero masks over a `width`-bit window.
pub fn random_masks(count: usize, width: u32, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    (0..count)
        .map(|_| loop {
            let m = rng.random::<u64>() & mask;
            if m != 0 {
                break m;
            }
        })
        .collect()
}
