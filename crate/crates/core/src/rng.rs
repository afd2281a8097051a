//! Portable, explicitly specified pseudo-random stream.
//!
//! The generator is SplitMix64. Every quantity below uses wrapping 64-bit
//! unsigned arithmetic, so the draw sequence for a given seed is identical on
//! every platform and in any language that reimplements it:
//!
//! ```text
//! GAMMA = 0x9E3779B97F4A7C15
//! mix(z):
//!     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!     return z ^ (z >> 31)
//! next_u64():
//!     state = state + GAMMA
//!     return mix(state)
//! ```
//!
//! A new stream starts with `state = seed`. Derived quantities:
//!
//! * `next_f64()` = `(next_u64() >> 11) * 2^-53`, uniform in `[0, 1)`.
//! * `below(n)` is Lemire's multiply-and-reject: `m = x * n` as a 128-bit
//!   product; if `low64(m) < n`, draws are rejected while
//!   `low64(m) < (2^64 - n) mod n`; the result is `high64(m)`.
//! * `derive(label)` returns a fresh stream seeded with
//!   `mix(seed + GAMMA * (label + 1))`. `mix` is a bijection and `GAMMA` is
//!   odd, so distinct labels give distinct seeds. The parent's position does
//!   not affect the child.

use serde::Serialize;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A seeded SplitMix64 stream with a draw counter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RandomStream {
    seed: u64,
    state: u64,
    position: u64,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            seed,
            state: seed,
            position: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        self.position += 1;
        mix(self.state)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`. `n` must be nonzero.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has no valid result");
        let mut m = u128::from(self.next_u64()) * u128::from(n);
        if (m as u64) < n {
            let threshold = n.wrapping_neg() % n;
            while (m as u64) < threshold {
                m = u128::from(self.next_u64()) * u128::from(n);
            }
        }
        (m >> 64) as u64
    }

    /// `k` distinct indices from `0..n` in sampled order (partial Fisher–Yates).
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }

    pub fn derive(&self, label: u64) -> RandomStream {
        RandomStream::new(mix(self
            .seed
            .wrapping_add(GAMMA.wrapping_mul(label.wrapping_add(1)))))
    }
}

/// Free-function form of [`RandomStream::derive`].
pub fn derive_stream(base: &RandomStream, label: u64) -> RandomStream {
    base.derive(label)
}
