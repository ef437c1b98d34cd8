//! Reproducible random draws.
//!
//! Every random choice in the crate goes through [`Stream`], a ChaCha8
//! generator (`rand_chacha::ChaCha8Rng`) seeded with `seed_from_u64`. The
//! seeding phase reads stream 0 and refinement reads stream 1 of the same
//! seed, so the two phases never share draws.
//!
//! Integers are drawn with bitmask rejection sampling: take the smallest
//! all-ones mask covering `n - 1`, draw `next_u64() & mask`, and retry while
//! the result is `>= n`. Permutations are Fisher–Yates from the top index
//! down. Floats in `[0, 1)` use the top 53 bits of `next_u64()`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEEDING_STREAM: u64 = 0;
pub const REFINEMENT_STREAM: u64 = 1;
pub const GENERATOR_STREAM: u64 = 2;

#[derive(Debug, Clone)]
pub struct Stream {
    inner: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "cannot draw from an empty range");
        let n = n as u64;
        if n == 1 {
            return 0;
        }
        let mask = u64::MAX >> (n - 1).leading_zeros();
        loop {
            let x = self.next_u64() & mask;
            if x < n {
                return x as usize;
            }
        }
    }

    /// Uniform float in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn shuffle<X>(&mut self, xs: &mut [X]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i + 1);
            xs.swap(i, j);
        }
    }

    /// A uniformly random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        self.shuffle(&mut order);
        order
    }

    /// `k` distinct indices from `0..n`, uniformly, in draw order.
    pub fn sample_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
