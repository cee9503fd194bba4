//! Arbitrary-precision arithmetic primitives shared by the rest of the
//! toolkit: exact integer square roots, perfect-square detection with a
//! residue prefilter, modular inverses, Jacobi/Legendre symbols and a small
//! prime sieve.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Bitsets of the quadratic residues modulo 64, 63, 65 and 11. A number that
/// is a perfect square must land in all four sets, while a random non-square
/// survives all four tests with probability below 1%.
const SQUARES_MOD_64: u64 = square_mask_64(64);
const SQUARES_MOD_63: u64 = square_mask_64(63);
const SQUARES_MOD_65: u128 = square_mask_128(65);
const SQUARES_MOD_11: u64 = square_mask_64(11);

const fn square_mask_64(m: u64) -> u64 {
    let mut mask = 0u64;
    let mut i = 0;
    while i < m {
        mask |= 1 << ((i * i) % m);
        i += 1;
    }
    mask
}

const fn square_mask_128(m: u128) -> u128 {
    let mut mask = 0u128;
    let mut i = 0;
    while i < m {
        mask |= 1 << ((i * i) % m);
        i += 1;
    }
    mask
}

/// Floor of the integer square root of `n`, computed exactly.
///
/// Values up to 128 bits take a hardware path; larger ones run a Newton
/// iteration seeded from the bit length, which converges monotonically from
/// above to the exact floor.
pub fn isqrt(n: &BigUint) -> BigUint {
    if let Some(v) = n.to_u128() {
        return BigUint::from(isqrt_u128(v));
    }
    // x0 = 2^ceil(bits/2) >= sqrt(n)
    let mut x: BigUint = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let y: BigUint = (&x + n / &x) >> 1u32;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Ceiling of the integer square root of `n`.
pub fn ceil_sqrt(n: &BigUint) -> BigUint {
    let s = isqrt(n);
    if &s * &s == *n {
        s
    } else {
        s + 1u32
    }
}

/// Exact floor square root on `u128`.
pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    // Float estimate is within a few ulps; correct it exactly.
    let mut x = (n as f64).sqrt() as u128;
    // Guard against the estimate drifting on either side.
    while x > 0 && x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

fn passes_square_prefilter_u128(n: u128) -> bool {
    SQUARES_MOD_64 >> (n as u64 & 63) & 1 != 0
        && SQUARES_MOD_63 >> (n % 63) as u64 & 1 != 0
        && SQUARES_MOD_65 >> (n % 65) & 1 != 0
        && SQUARES_MOD_11 >> (n % 11) as u64 & 1 != 0
}

fn passes_square_prefilter_big(n: &BigUint) -> bool {
    let low = n.iter_u64_digits().next().unwrap_or(0);
    SQUARES_MOD_64 >> (low & 63) & 1 != 0
        && SQUARES_MOD_63 >> (n % 63u32).to_u64().unwrap() & 1 != 0
        && SQUARES_MOD_65 >> (n % 65u32).to_u64().unwrap() & 1 != 0
        && SQUARES_MOD_11 >> (n % 11u32).to_u64().unwrap() & 1 != 0
}

/// Returns `Some(sqrt(n))` when `n` is a perfect square.
///
/// The residue prefilter modulo 64, 63, 65 and 11 rejects the bulk of
/// non-squares before the exact `isqrt` check runs.
pub fn is_square(n: &BigUint) -> Option<BigUint> {
    if let Some(v) = n.to_u128() {
        return is_square_u128(v).map(BigUint::from);
    }
    if !passes_square_prefilter_big(n) {
        return None;
    }
    let s = isqrt(n);
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// `u128` fast path of [`is_square`].
pub fn is_square_u128(n: u128) -> Option<u128> {
    if !passes_square_prefilter_u128(n) {
        return None;
    }
    let s = isqrt_u128(n);
    if s * s == n {
        Some(s)
    } else {
        None
    }
}

/// Modular inverse of `a` modulo `m`, in `[0, m)`.
///
/// Fails with [`Error::NotInvertible`] carrying the gcd when `gcd(a, m) > 1`;
/// factorization callers treat a revealed common factor as progress.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Result<BigUint> {
    if m < &BigUint::from(2u32) {
        return Err(Error::InvalidInput(format!(
            "modulus for inversion must be at least 2, got {m}"
        )));
    }
    let a_red = a % m;
    let (g, x) = ext_gcd(&BigInt::from(a_red), &BigInt::from(m.clone()));
    if !g.is_one() {
        return Err(Error::NotInvertible {
            value: a.clone(),
            modulus: m.clone(),
            gcd: g.to_biguint().unwrap(),
        });
    }
    let m_int = BigInt::from(m.clone());
    let x = ((x % &m_int) + &m_int) % &m_int;
    Ok(x.to_biguint().unwrap())
}

/// Extended Euclid: returns `(gcd, x)` with `a*x ≡ gcd (mod b)`.
fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = r1;
        r1 = r2;
        let s2 = &s0 - &q * &s1;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}

/// Modular inverse on `u64`, or `None` when not coprime.
pub(crate) fn inv_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (a as i128 % m as i128, m as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Jacobi symbol `(a|n)` for odd `n >= 3`; equals the Legendre symbol when
/// `n` is prime. Returns 0 when `gcd(a, n) > 1`.
pub fn jacobi(a: &BigUint, n: u64) -> Result<i8> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::NotOddPrime(n));
    }
    Ok(jacobi_u64((a % n).to_u64().unwrap(), n))
}

pub(crate) fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1 && n >= 3);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol `(a|r)` for an odd prime `r`.
///
/// Implemented through the Jacobi recursion, so it also accepts composite odd
/// lower arguments (where it computes the Jacobi symbol). Returns 0 for
/// `a ≡ 0 (mod r)`.
pub fn legendre(a: &BigUint, r: u64) -> Result<i8> {
    jacobi(a, r)
}

/// All primes up to and including `bound`, ascending.
pub fn primes_upto(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Deterministic Miller-Rabin for `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // This base set decides primality for every n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_u64(n: u64) -> u64 {
    let mut c = n + 1 + (n % 2);
    if n < 2 {
        return 2;
    }
    if n == 2 {
        return 3;
    }
    loop {
        if is_prime_u64(c) {
            return c;
        }
        c += 2;
    }
}

pub(crate) fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}
