//! Shared fixtures for the integration suites: a deterministic PRNG and a
//! semiprime generator, so every sweep is reproducible.

use hyperfactor::num::next_prime_u64;
use num_bigint::BigUint;

/// SplitMix64: tiny, seedable, good enough for test sweeps.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Random semiprime `p * q` with `p` in `[lo, hi)` and `q - p <= max_gap`.
pub fn random_semiprime(rng: &mut SplitMix64, lo: u64, hi: u64, max_gap: u64) -> (u64, u64) {
    loop {
        let p = next_prime_u64(lo + rng.below(hi - lo));
        let q = next_prime_u64(p + rng.below(max_gap * 9 / 10) + 1);
        if q - p <= max_gap && p < hi {
            return (p, q);
        }
    }
}

pub fn n45() -> BigUint {
    BigUint::parse_bytes(b"17344343992304993085649094809", 10).unwrap()
}

pub const N45_P: u64 = 129411310904131;
pub const N45_Q: u64 = 134024946282739;
