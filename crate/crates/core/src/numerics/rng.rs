use rand_core::{Rng as _, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

/// Seeded pseudo-random source.
///
/// The bit stream is xoshiro256** (Blackman & Vigna). The 256-bit state is
/// expanded from the 64-bit seed with SplitMix64: starting from `z = seed`,
/// each state word is produced by
///
/// ```text
/// z += 0x9e3779b97f4a7c15
/// x = z
/// x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9
/// x = (x ^ (x >> 27)) * 0x94d049bb133111eb
/// word = x ^ (x >> 31)
/// ```
///
/// Output is `rotl(s1 * 5, 7) * 9` followed by the usual xoshiro256 state
/// transition. Derived samples are defined here rather than delegated so the
/// stream is reproducible from this description alone:
///
/// * [`uniform`](Rng::uniform): `(next_u64() >> 11) * 2^-53`, in `[0, 1)`.
/// * [`below`](Rng::below): rejection sampling; draws `x = next_u64()` until
///   `x < 2^64 - (2^64 mod n)`, then returns `x mod n`.
/// * [`normal`](Rng::normal): Box-Muller, `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`
///   using two consecutive uniforms; the sine branch is discarded.
/// * [`shuffle`](Rng::shuffle): Fisher-Yates from the back, swapping `i` with
///   `below(i + 1)` for `i = n-1 .. 1`.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    inner: Xoshiro256StarStar,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { seed, inner: Xoshiro256StarStar::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let n = n as u64;
        let rem = (u64::MAX - n + 1) % n; // 2^64 mod n
        loop {
            let x = self.next_u64();
            if rem == 0 || x < 0u64.wrapping_sub(rem) {
                return (x % n) as usize;
            }
        }
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(1.0 - u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
    }

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
    use alloc::vec::Vec;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::new(99);
        let mut b = Rng::new(99);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_ne!(Rng::new(1).next_u64(), Rng::new(2).next_u64());
    }

    #[test]
    fn known_stream_prefix() {
        // SplitMix64(0) expansion followed by xoshiro256**; frozen so that a
        // dependency upgrade cannot silently change every seeded result.
        let mut r = Rng::new(0);
        let got: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        assert_eq!(got, FROZEN_SEED0);
    }

    const FROZEN_SEED0: [u64; 3] = [0x99ec5f36cb75f2b4, 0xbf6e1f784956452a, 0x1a5f849d4933e6e0];

    #[test]
    fn below_in_range_and_covers() {
        let mut r = Rng::new(5);
        let mut seen = [false; 7];
        for _ in 0..1000 {
            let x = r.below(7);
            seen[x] = true;
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(r.below(1), 0);
    }

    #[test]
    fn normal_moments() {
        let mut r = Rng::new(11);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| r.normal()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01);
        assert!((var - 1.0).abs() < 0.02);
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut r = Rng::new(8);
        let mut v: Vec<usize> = (0..50).collect();
        r.shuffle(&mut v);
        let mut s = v.clone();
        s.sort_unstable();
        assert_eq!(s, (0..50).collect::<Vec<_>>());
        assert_ne!(v, (0..50).collect::<Vec<_>>());
    }
}
