//! Seeded random streams.
//!
//! All randomness in the crate comes from a [`Seed`]. A seed keys a ChaCha20
//! stream (the 256-bit key is four consecutive SplitMix64 outputs of the seed,
//! nonce and counter start at zero). Uniform variates take the top 53 bits of
//! each 64-bit word; standard normals use the Box–Muller transform, consuming
//! two uniforms per pair of normals. Independent sub-streams are obtained with
//! [`Seed::derive`], so parallel work never shares a generator.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use std::f64::consts::PI;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Seed(pub u64);

impl Seed {
    pub const fn new(value: u64) -> Self {
        Seed(value)
    }

    pub const fn value(self) -> u64 {
        self.0
    }

    /// Sub-seed for stream `index`. Pure function of `(self, index)`.
    pub fn derive(self, index: u64) -> Seed {
        let mut state = self.0 ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03);
        // two rounds so that nearby (seed, index) pairs decorrelate
        splitmix64(&mut state);
        Seed(splitmix64(&mut state))
    }

    pub fn stream(self) -> RandomStream {
        RandomStream::new(self)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// Deterministic generator of uniform and standard-normal variates.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha20Rng,
    spare_normal: Option<f64>,
}

impl RandomStream {
    pub fn new(seed: Seed) -> Self {
        let mut state = seed.0;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        RandomStream {
            rng: ChaCha20Rng::from_seed(key),
            spare_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n`, by rejection (no modulo bias).
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.rng.next_u64();
            if v < zone {
                return (v % n) as usize;
            }
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // 1 - u lies in (0, 1], so the log is finite
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.standard_normal();
        }
    }

    /// `count` distinct indices drawn uniformly from `0..n` (partial Fisher–Yates).
    pub fn sample_without_replacement(&mut self, n: usize, count: usize) -> Vec<usize> {
        assert!(count <= n, "cannot sample {count} of {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..count {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(count);
        pool
    }

    /// In-place Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Seed(7).stream();
        let mut b = Seed(7).stream();
        for _ in 0..100 {
            assert_eq!(a.standard_normal().to_bits(), b.standard_normal().to_bits());
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let s = Seed(1);
        assert_ne!(s.derive(0), s.derive(1));
        assert_ne!(s.derive(0), Seed(2).derive(0));
        assert_eq!(s.derive(5), s.derive(5));
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut s = Seed(3).stream();
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn normal_moments() {
        let mut s = Seed(11).stream();
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| s.standard_normal()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn sampling_without_replacement_is_distinct() {
        let mut s = Seed(5).stream();
        let mut idx = s.sample_without_replacement(50, 20);
        assert_eq!(idx.len(), 20);
        idx.sort_unstable();
        idx.dedup();
        assert_eq!(idx.len(), 20);
        assert!(idx.iter().all(|&i| i < 50));
    }
}
