//! Counter-based 64-bit generator used for every random choice in the crate.
//!
//! The stream for a seed `s` is fully determined by this description, so other
//! implementations can reproduce artifacts bit for bit:
//!
//! * the `i`-th output (`i = 1, 2, ...`) is `mix(s + i * 0x9E3779B97F4A7C15)`,
//!   with wrapping 64-bit arithmetic;
//! * `mix(z)`: `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9`;
//!   `z = (z ^ (z >> 27)) * 0x94D049BB133111EB`; return `z ^ (z >> 31)`;
//! * `below(n)` draws outputs `x` until `x < n * floor(2^64 / n)` and returns
//!   `x % n`;
//! * `unit_f64()` returns `(x >> 11) * 2^-53`;
//! * `derive(s, tag)` returns `mix(s ^ mix(tag + 0x9E3779B97F4A7C15))`; it
//!   gives independent child streams (per attempt, per substep).

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for an independent child stream.
pub fn derive(seed: u64, tag: u64) -> u64 {
    mix(seed ^ mix(tag.wrapping_add(GOLDEN)))
}

#[derive(Debug, Clone)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform integer in `[0, n)`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let zone = (u64::MAX / n) * n;
        loop {
            let x = self.next_u64();
            // u64::MAX / n * n never overflows; a draw equal to zone is rejected too.
            if x < zone {
                return x % n;
            }
        }
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
