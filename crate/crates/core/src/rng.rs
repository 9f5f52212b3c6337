//! Seeded pseudo-random numbers with a pinned, portable update rule.
//!
//! The generator is SplitMix64 (Steele, Lea, Flood 2014). The full state is
//! one `u64`; each draw advances the state by the golden-ratio increment and
//! scrambles it with two xor-multiply rounds:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! All arithmetic is wrapping, so a given seed produces the same stream on
//! every platform. Derived draws are pinned too: `uniform` takes the top 53
//! bits, and `normal` maps exactly two uniforms through Box-Muller.

/// Deterministic 64-bit generator (SplitMix64). Single-owner: clone it if
/// two consumers need independent, reproducible streams.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`: the top 53 bits scaled by 2^-53.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(lo, hi)`; the endpoints have probability zero up to
    /// floating-point granularity (a 0 draw is nudged half a ulp in).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        let u = self.uniform().max(f64::EPSILON / 2.0);
        lo + u * (hi - lo)
    }

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    pub fn normal(&mut self) -> f64 {
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform integer in `[0, n)` by rejection, so the choice is unbiased.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// `k` distinct indices sampled uniformly from `0..n` (partial
    /// Fisher-Yates), in the order they were drawn.
    pub fn sample_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }

    /// Vector of i.i.d. standard normal entries.
    pub fn normal_vector(&mut self, n: usize) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_fn(n, |_, _| self.normal())
    }
}
