//! Seeded sampling helpers. Every sampled loop in the crate draws from a
//! ChaCha stream so results depend only on the seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` distinct indices from `0..n` (all of them when `count >= n`), sorted.
pub fn distinct_indices(n: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    if count < n {
        let mut r = rng(seed);
        all.shuffle(&mut r);
        all.truncate(count);
        all.sort_unstable();
    }
    all
}

/// `count` ordered pairs of distinct indices from `0..n`.
pub fn distinct_pairs(n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let a = r.gen_range(0..n);
            let mut b = r.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect()
}
