//! Shared fixtures for the criterion benches.

use num_bigint::BigUint;

/// The 29-digit semiprime from the prime-power tuning walkthrough.
pub fn n45() -> BigUint {
    BigUint::parse_bytes(b"17344343992304993085649094809", 10).unwrap()
}

/// Mid-size semiprime with a 10^4-scale divisor difference.
pub fn n_mid() -> BigUint {
    // 999983 * 1010203
    BigUint::from(999_983u64) * BigUint::from(1_010_203u64)
}
