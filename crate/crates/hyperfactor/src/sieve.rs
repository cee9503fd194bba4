//! Modular hyperbolas and hyperbolic sieve sets.
//!
//! For `gcd(Nk, m) = 1` the hyperbola `H_{N,m}` is the set of residue pairs
//! `(x, y)` with `xy ≡ N (mod m)`, and the sieve set `L_{N,m,k}` collects
//! `kx + y (mod m)` over the hyperbola. Every factorization `N = uv` with
//! `ab ≡ k` leaves its trace `au + bv (mod m)` in the sieve set, so the set
//! acts as a modular filter on candidate linear combinations of divisors.
//!
//! Cardinalities follow closed forms: `(r + (k^{-1}N|r))/2` for an odd prime
//! `r`, a two-branch recurrence for odd prime powers, and a table-plus-
//! recurrence for powers of two. Brute-force enumeration doubles as the
//! oracle for all of them.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::num::{inv_u64, is_prime_u64, jacobi_u64, mulmod_u64};

/// Default ceiling for whole-modulus enumeration (`hyperbola`,
/// `sieve_enumerate`).
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;
/// Default ceiling for per-factor prime-power enumeration.
pub const DEFAULT_FACTOR_BUDGET: u64 = 1 << 20;

/// A modulus held by its prime-power factorization, with the composed value
/// and Euler totient cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredModulus {
    factors: Vec<PrimePower>,
    value: BigUint,
    phi: BigUint,
}

/// One prime-power factor `r^e`. The composed value must fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePower {
    pub prime: u64,
    pub exp: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.prime.pow(self.exp)
    }
}

impl FactoredModulus {
    /// Build from `(prime, exponent)` pairs with strictly increasing primes.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut parts = Vec::with_capacity(factors.len());
        let mut value = BigUint::one();
        let mut phi = BigUint::one();
        let mut last = 0u64;
        for (prime, exp) in factors {
            if prime <= last {
                return Err(Error::InvalidInput(format!(
                    "primes must be strictly increasing, got {prime} after {last}"
                )));
            }
            if !is_prime_u64(prime) {
                return Err(Error::InvalidInput(format!("{prime} is not prime")));
            }
            if exp == 0 {
                return Err(Error::InvalidInput(format!(
                    "exponent of {prime} must be at least 1"
                )));
            }
            let pp = PrimePower { prime, exp };
            if prime.checked_pow(exp).is_none() {
                return Err(Error::InvalidInput(format!(
                    "{prime}^{exp} does not fit a 64-bit factor"
                )));
            }
            value *= pp.value();
            phi *= pp.value() / prime * (prime - 1);
            last = prime;
            parts.push(pp);
        }
        Ok(FactoredModulus {
            factors: parts,
            value,
            phi,
        })
    }

    /// Build from distinct primes, each with exponent 1.
    pub fn from_primes(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::from_factors(primes.into_iter().map(|p| (p, 1)).collect())
    }

    /// Factor a plain value by trial division. Intended for CLI input like
    /// `--m 4620`; refuses values whose factorization would need division
    /// beyond the budget.
    pub fn factor_value(m: &BigUint, budget: u64) -> Result<Self> {
        let mut rest = m.clone();
        if rest.is_zero() {
            return Err(Error::InvalidInput("modulus must be nonzero".into()));
        }
        let mut factors = Vec::new();
        let mut p = 2u64;
        while rest > BigUint::one() {
            if p > budget {
                return Err(Error::BudgetExceeded {
                    what: "trial-division bound while factoring modulus",
                    requested: p,
                    limit: budget,
                });
            }
            if let Some(r) = rest.to_u64() {
                if is_prime_u64(r) {
                    let (last_p, e) = (r, 1);
                    match factors.last_mut() {
                        Some((fp, fe)) if *fp == last_p => *fe += e,
                        _ => factors.push((last_p, e)),
                    }
                    break;
                }
            }
            let mut e = 0u32;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
            p = if p == 2 { 3 } else { p + 2 };
        }
        Self::from_factors(factors)
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn phi(&self) -> &BigUint {
        &self.phi
    }

    /// First prime factor shared with `n`, if any.
    pub fn common_prime(&self, n: &BigUint) -> Option<u64> {
        self.factors
            .iter()
            .map(|f| f.prime)
            .find(|&p| (n % p).is_zero())
    }

    /// Remove the largest prime (its whole power) from the factorization.
    pub fn without_largest_prime(&self) -> Result<Self> {
        let mut factors: Vec<(u64, u32)> =
            self.factors.iter().map(|f| (f.prime, f.exp)).collect();
        factors.pop();
        Self::from_factors(factors)
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|f| f.prime)
    }

    /// Compact `2^8*3^3*5^2*7` style rendering.
    pub fn describe(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|f| {
                if f.exp == 1 {
                    f.prime.to_string()
                } else {
                    format!("{}^{}", f.prime, f.exp)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Sieve set `L_{N,m,k}` (or its translation `L̄`), stored per prime-power
/// factor for CRT-based streaming.
#[derive(Debug, Clone)]
pub struct SieveSet {
    modulus: FactoredModulus,
    k: BigUint,
    shift: BigUint,
    per_factor: Vec<Vec<u64>>,
    cardinality: BigUint,
}

impl SieveSet {
    pub fn modulus(&self) -> &FactoredModulus {
        &self.modulus
    }

    pub fn k(&self) -> &BigUint {
        &self.k
    }

    /// Translation applied to every residue (`0` for the plain set, `L mod m`
    /// for the shifted set).
    pub fn shift(&self) -> &BigUint {
        &self.shift
    }

    /// Sorted residues of factor `i`, modulo that factor's prime power.
    pub fn per_factor(&self) -> &[Vec<u64>] {
        &self.per_factor
    }

    /// Product of the per-factor list lengths.
    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }

    /// Residue classes ready for [`crate::crt::CrtEnumerator`].
    pub fn crt_classes(&self) -> Vec<crate::crt::CrtClass> {
        self.modulus
            .factors
            .iter()
            .zip(&self.per_factor)
            .map(|(f, residues)| crate::crt::CrtClass::new(f.value(), residues.clone()))
            .collect()
    }
}

/// ν-profile of a sieve element modulo an odd prime power: the minimal
/// `r`-adic valuation of `kx - y` over the hyperbola pairs representing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NuProfile {
    pub element: u64,
    pub nu: Nu,
    pub pair_count: u64,
}

/// Valuation with the `kx ≡ y` degenerate case mapped to a sentinel above
/// every finite exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Nu {
    Finite(u32),
    Infinite,
}

impl Nu {
    /// `ν >= e/2`, the comparison driving the prime-power counting lemma.
    pub fn at_least_half(&self, e: u32) -> bool {
        match self {
            Nu::Infinite => true,
            Nu::Finite(v) => 2 * v >= e,
        }
    }
}

fn check_budget(m: u64, what: &'static str, budget: u64) -> Result<()> {
    if m > budget {
        return Err(Error::BudgetExceeded {
            what,
            requested: m,
            limit: budget,
        });
    }
    Ok(())
}

fn require_coprime(n: &BigUint, k: u64, m: u64) -> Result<()> {
    if m <= 1 {
        return Ok(());
    }
    let g = n.gcd(&BigUint::from(m));
    if !g.is_one() {
        return Err(Error::CommonFactor(g));
    }
    let gk = (k as u128).gcd(&(m as u128));
    if gk != 1 {
        return Err(Error::CommonFactor(BigUint::from(gk)));
    }
    Ok(())
}

/// The modular hyperbola `H_{N,m}`: all pairs `(x, N x^{-1} mod m)` for
/// `x` in `Z_m^*`, sorted by `x`. Has exactly `phi(m)` elements.
///
/// `m = 1` degenerates to `{(0, 0)}` so that product formulas stay total.
pub fn hyperbola(n: &BigUint, m: u64, budget: u64) -> Result<Vec<(u64, u64)>> {
    check_budget(m, "hyperbola modulus", budget)?;
    if m == 0 {
        return Err(Error::InvalidInput("modulus must be nonzero".into()));
    }
    if m == 1 {
        return Ok(vec![(0, 0)]);
    }
    require_coprime(n, 1, m)?;
    let n_red = (n % m).to_u64().unwrap();
    let mut pairs = Vec::new();
    for x in 1..m {
        if let Some(x_inv) = inv_u64(x, m) {
            pairs.push((x, mulmod_u64(n_red, x_inv, m)));
        }
    }
    Ok(pairs)
}

/// Brute-force enumeration of `L_{N,m,k}`: sorted, deduplicated values of
/// `kx + y (mod m)` over the hyperbola.
///
/// This is the oracle every closed-form cardinality is tested against.
pub fn sieve_enumerate(n: &BigUint, m: u64, k: u64, budget: u64) -> Result<Vec<u64>> {
    check_budget(m, "sieve enumeration modulus", budget)?;
    if m == 1 {
        return Ok(vec![0]);
    }
    require_coprime(n, k, m)?;
    let k_red = k % m;
    let mut out: Vec<u64> = hyperbola(n, m, budget)?
        .into_iter()
        .map(|(x, y)| (mulmod_u64(k_red, x, m) + y) % m)
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `|L_{N,r,k}| = (r + (k^{-1}N | r)) / 2` for an odd prime `r`.
pub fn card_prime(n: &BigUint, r: u64, k: u64) -> Result<u64> {
    if !is_prime_u64(r) || r < 3 {
        return Err(Error::NotOddPrime(r));
    }
    require_coprime(n, k, r)?;
    let sym = base_symbol(n, r, k);
    Ok(((r as i64 + sym as i64) / 2) as u64)
}

/// Legendre symbol `(k^{-1} N | r)`, the branch selector of the prime-power
/// recurrence.
fn base_symbol(n: &BigUint, r: u64, k: u64) -> i8 {
    let k_inv = inv_u64(k % r, r).expect("coprimality checked");
    let n_red = (n % r).to_u64().unwrap();
    jacobi_u64(mulmod_u64(k_inv, n_red, r), r)
}

/// `|L_{N,r^e,k}|` for an odd prime power, by the corrected recurrence.
///
/// In the nonresidue branch every level multiplies by `r`. In the residue
/// branch the step `e -> e+1` is `|L| * r - 2^(e mod 2) * (r - 1)`: exactly
/// two elements sit at valuation `ceil(e/2)` and collapse, two at a time on
/// odd levels and half-collapsing on even ones.
pub fn card_prime_power(n: &BigUint, r: u64, e: u32, k: u64) -> Result<u64> {
    if e == 0 {
        return Ok(1);
    }
    let mut card = card_prime(n, r, k)?;
    if base_symbol(n, r, k) == -1 {
        return Ok(card * r.pow(e - 1));
    }
    for level in 1..e {
        card = card * r - (1u64 << (level % 2)) * (r - 1);
    }
    Ok(card)
}

/// `|L_{N,2^e,k}|` for odd `N` and `k`: table through `2^5`, then a
/// recurrence branching on `N mod 8` relative to `k`.
pub fn card_two_power(n: &BigUint, e: u32, k: u64) -> Result<u64> {
    if (n % 2u32).is_zero() {
        return Err(Error::EvenInput(n.clone()));
    }
    if k.is_multiple_of(2) {
        return Err(Error::EvenInput(BigUint::from(k)));
    }
    if e == 0 {
        return Ok(1);
    }
    let n8 = (n % 8u32).to_u64().unwrap();
    let k8 = k % 8;
    let three_k_mod_4 = 3 * k8 % 4;
    let five_k_mod_8 = 5 * k8 % 8;
    match e {
        1 | 2 => return Ok(1),
        3 => return Ok(if n8 % 4 == three_k_mod_4 { 1 } else { 2 }),
        4 => return Ok(2),
        _ => {}
    }
    let mut card = if n8 == five_k_mod_8 { 2 } else { 4 };
    for level in 5..e {
        if n8 % 4 == three_k_mod_4 || n8 == five_k_mod_8 {
            card *= 2;
        } else {
            // N ≡ k (mod 8)
            card = (card - (1u64 << (level % 2))) * 2;
        }
    }
    Ok(card)
}

/// Closed-form `|L_{N,rho,k}|` for a prime power `rho`, dispatching between
/// the odd-prime and two-power formulas.
pub fn card_prime_power_value(n: &BigUint, rho: PrimePower, k: u64) -> Result<u64> {
    if rho.prime == 2 {
        card_two_power(n, rho.exp, k)
    } else {
        card_prime_power(n, rho.prime, rho.exp, k)
    }
}

/// `|L_{N,m,k}|` for a factored modulus, as the product of per-factor
/// closed forms.
pub fn sieve_cardinality(n: &BigUint, modulus: &FactoredModulus, k: &BigUint) -> Result<BigUint> {
    let mut card = BigUint::one();
    for factor in modulus.factors() {
        let k_red = (k % factor.value()).to_u64().unwrap();
        card *= card_prime_power_value(n, *factor, k_red)?;
    }
    Ok(card)
}

/// `L_{N,rho,k}` for a prime power `rho` by direct enumeration; the building
/// block CRT recombination works from.
pub fn sieve_factor_residues(n: &BigUint, rho: PrimePower, k: u64, budget: u64) -> Result<Vec<u64>> {
    sieve_enumerate(n, rho.value(), k, budget)
}

/// Assemble a [`SieveSet`]: per-factor residues of `L_{N,m,k}`, each list
/// translated by `-shift` and renormalized, with the total cardinality as
/// the product of list lengths.
pub fn build_sieve_set(
    n: &BigUint,
    modulus: FactoredModulus,
    k: &BigUint,
    shift: &BigUint,
    factor_budget: u64,
) -> Result<SieveSet> {
    if let Some(p) = modulus.common_prime(n) {
        return Err(Error::CommonFactor(BigUint::from(p)));
    }
    if let Some(p) = modulus.common_prime(k) {
        return Err(Error::CommonFactor(BigUint::from(p)));
    }
    let mut per_factor = Vec::with_capacity(modulus.omega());
    let mut cardinality = BigUint::one();
    for factor in modulus.factors() {
        let rho = factor.value();
        let k_red = (k % rho).to_u64().unwrap();
        let raw = sieve_factor_residues(n, *factor, k_red, factor_budget)?;
        let shift_red = (shift % rho).to_u64().unwrap();
        let mut shifted: Vec<u64> = raw
            .into_iter()
            .map(|s| (s + rho - shift_red) % rho)
            .collect();
        shifted.sort_unstable();
        debug_assert_eq!(
            shifted.len() as u64,
            card_prime_power_value(n, *factor, k_red)?,
            "enumerated length disagrees with closed form for {rho}"
        );
        cardinality *= shifted.len();
        per_factor.push(shifted);
    }
    Ok(SieveSet {
        modulus,
        k: k.clone(),
        shift: shift.clone(),
        per_factor,
        cardinality,
    })
}

/// ν-profile of `a` in `L_{N,r^e,k}`: enumerate the pairs representing `a`
/// and take the minimal `r`-adic valuation of `kx - y`, with `kx ≡ y`
/// mapping to the infinite sentinel.
pub fn nu_value(n: &BigUint, r: u64, e: u32, k: u64, a: u64, budget: u64) -> Result<NuProfile> {
    if !is_prime_u64(r) || r < 3 {
        return Err(Error::NotOddPrime(r));
    }
    let rho = r
        .checked_pow(e)
        .ok_or_else(|| Error::InvalidInput(format!("{r}^{e} overflows u64")))?;
    check_budget(rho, "nu-value modulus", budget)?;
    require_coprime(n, k, rho)?;
    let k_red = k % rho;
    let mut best: Option<Nu> = None;
    let mut pair_count = 0u64;
    for (x, y) in hyperbola(n, rho, budget)? {
        if (mulmod_u64(k_red, x, rho) + y) % rho != a % rho {
            continue;
        }
        pair_count += 1;
        let diff = (mulmod_u64(k_red, x, rho) + rho - y) % rho;
        let nu = if diff == 0 {
            Nu::Infinite
        } else {
            let mut v = 0u32;
            let mut d = diff;
            while d.is_multiple_of(r) {
                d /= r;
                v += 1;
            }
            Nu::Finite(v)
        };
        best = Some(match best {
            None => nu,
            Some(b) => b.min(nu),
        });
    }
    match best {
        Some(nu) => Ok(NuProfile {
            element: a % rho,
            nu,
            pair_count,
        }),
        None => Err(Error::NotInSieveSet {
            element: a,
            modulus: rho,
        }),
    }
}

/// How many elements of `L_{N,r^{e+1},k}` reduce to `a` modulo `r^e`:
/// `r` when `ν_a < e/2`, `(r+1)/2` at `ν_a = e/2`, and 1 above.
pub fn induced_count(n: &BigUint, r: u64, e: u32, k: u64, a: u64, budget: u64) -> Result<u64> {
    let profile = nu_value(n, r, e, k, a, budget)?;
    Ok(match profile.nu {
        Nu::Finite(v) if 2 * v < e => r,
        Nu::Finite(v) if 2 * v == e => r.div_ceil(2),
        _ => 1,
    })
}

/// Cardinality of `{x in Z_{r^e} : x^2 - t is a square mod r^e}` (squares
/// include zero), computed as `|L_{t̄, r^e, 1}|` for `t̄ = 4^{-1} t`.
pub fn shifted_qr_card(t: &BigUint, r: u64, e: u32) -> Result<u64> {
    if !is_prime_u64(r) || r < 3 {
        return Err(Error::NotOddPrime(r));
    }
    let g = t.gcd(&BigUint::from(r));
    if !g.is_one() {
        return Err(Error::CommonFactor(g));
    }
    let rho = r
        .checked_pow(e)
        .ok_or_else(|| Error::InvalidInput(format!("{r}^{e} overflows u64")))?;
    let four_inv = inv_u64(4 % rho, rho).expect("odd modulus");
    let t_bar = mulmod_u64((t % rho).to_u64().unwrap(), four_inv, rho);
    card_prime_power(&BigUint::from(t_bar), r, e, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u128) -> BigUint {
        BigUint::from(n)
    }

    const N: u128 = 7909787;
    const B: u64 = DEFAULT_ENUM_BUDGET;

    #[test]
    fn hyperbola_examples() {
        let pairs = hyperbola(&big(N), 5, B).unwrap();
        assert_eq!(pairs, vec![(1, 2), (2, 1), (3, 4), (4, 3)]);
        assert_eq!(hyperbola(&big(7), 3, B).unwrap(), vec![(1, 1), (2, 2)]);
        assert_eq!(hyperbola(&big(N), 1, B).unwrap(), vec![(0, 0)]);
        assert_eq!(
            hyperbola(&big(10), 5, B).unwrap_err(),
            Error::CommonFactor(big(5))
        );
        assert!(matches!(
            hyperbola(&big(3), 1 << 30, B).unwrap_err(),
            Error::BudgetExceeded { .. }
        ));
    }

    #[test]
    fn hyperbola_length_is_phi() {
        for m in [4u64, 9, 12, 45, 64, 101] {
            let n = big(7909787);
            let phi = (1..m).filter(|x| x.gcd(&m) == 1).count();
            assert_eq!(hyperbola(&n, m, B).unwrap().len(), phi, "m={m}");
        }
    }

    #[test]
    fn sieve_enumerate_examples() {
        assert_eq!(sieve_enumerate(&big(N), 5, 1, B).unwrap(), vec![2, 3]);
        let l = sieve_enumerate(&big(N), 4620, 1, B).unwrap();
        assert_eq!(l.len(), 40);
        assert!(l.contains(&1272));
        assert_eq!(
            sieve_enumerate(&big(17), 64, 1, B).unwrap(),
            vec![18, 30, 34, 46]
        );
    }

    #[test]
    fn card_prime_examples() {
        assert_eq!(card_prime(&big(N), 5, 1).unwrap(), 2);
        assert_eq!(card_prime(&big(N), 7, 1).unwrap(), 4);
        assert_eq!(card_prime(&big(2), 3, 1).unwrap(), 1);
        assert_eq!(
            card_prime(&big(10), 5, 1).unwrap_err(),
            Error::CommonFactor(big(5))
        );
        assert_eq!(card_prime(&big(7), 4, 1).unwrap_err(), Error::NotOddPrime(4));
    }

    #[test]
    fn card_prime_power_examples() {
        assert_eq!(card_prime_power(&big(7), 3, 2, 1).unwrap(), 2);
        assert_eq!(
            sieve_enumerate(&big(7), 9, 1, B).unwrap(),
            vec![1, 8]
        );
        assert_eq!(card_prime_power(&big(4), 3, 3, 1).unwrap(), 4);
        assert_eq!(
            sieve_enumerate(&big(4), 27, 1, B).unwrap(),
            vec![4, 5, 22, 23]
        );
        assert_eq!(card_prime_power(&big(2), 3, 2, 1).unwrap(), 3);
        assert_eq!(sieve_enumerate(&big(2), 9, 1, B).unwrap().len(), 3);
    }

    #[test]
    fn card_two_power_examples() {
        assert_eq!(card_two_power(&big(17), 4, 1).unwrap(), 2);
        assert_eq!(sieve_enumerate(&big(17), 16, 1, B).unwrap(), vec![2, 14]);
        assert_eq!(card_two_power(&big(17), 5, 1).unwrap(), 4);
        assert_eq!(
            sieve_enumerate(&big(17), 32, 1, B).unwrap(),
            vec![2, 14, 18, 30]
        );
        assert!(card_two_power(&big(4), 3, 1).is_err());
        assert!(card_two_power(&big(17), 3, 2).is_err());
    }

    #[test]
    fn sieve_factor_residue_examples() {
        let pp = |prime, exp| PrimePower { prime, exp };
        assert_eq!(
            sieve_factor_residues(&big(N), pp(5, 1), 1, B).unwrap(),
            vec![2, 3]
        );
        assert_eq!(
            sieve_factor_residues(&big(7), pp(3, 2), 1, B).unwrap(),
            vec![1, 8]
        );
        assert_eq!(
            sieve_factor_residues(&big(17), pp(2, 4), 1, B).unwrap(),
            vec![2, 14]
        );
    }

    #[test]
    fn build_sieve_set_intro_example() {
        let m = FactoredModulus::from_factors(vec![(2, 2), (3, 1), (5, 1), (7, 1), (11, 1)])
            .unwrap();
        assert_eq!(m.value(), &big(4620));
        let set = build_sieve_set(&big(N), m, &BigUint::one(), &BigUint::zero(), B).unwrap();
        assert_eq!(set.cardinality(), &big(40));
    }

    #[test]
    fn build_sieve_set_single_factor_matches_card() {
        for r in [3u64, 7, 13, 101] {
            let m = FactoredModulus::from_primes([r]).unwrap();
            let set =
                build_sieve_set(&big(N), m, &BigUint::one(), &BigUint::zero(), B).unwrap();
            assert_eq!(
                set.cardinality(),
                &BigUint::from(card_prime(&big(N), r, 1).unwrap())
            );
        }
    }

    #[test]
    fn build_sieve_set_reports_common_factor() {
        let m = FactoredModulus::from_primes([3, 5]).unwrap();
        assert_eq!(
            build_sieve_set(&big(15), m, &BigUint::one(), &BigUint::zero(), B).unwrap_err(),
            Error::CommonFactor(big(3))
        );
    }

    #[test]
    fn nu_value_examples() {
        let p = nu_value(&big(7), 3, 2, 1, 1, B).unwrap();
        assert_eq!(p.nu, Nu::Finite(1));
        assert_eq!(p.pair_count, 3);
        assert_eq!(nu_value(&big(7), 3, 1, 1, 2, B).unwrap().nu, Nu::Infinite);
        assert_eq!(nu_value(&big(2), 3, 1, 1, 0, B).unwrap().nu, Nu::Finite(0));
        assert!(matches!(
            nu_value(&big(7), 3, 1, 1, 0, B).unwrap_err(),
            Error::NotInSieveSet { .. }
        ));
    }

    #[test]
    fn induced_count_examples() {
        assert_eq!(induced_count(&big(2), 3, 1, 1, 0, B).unwrap(), 3);
        assert_eq!(induced_count(&big(7), 3, 1, 1, 2, B).unwrap(), 1);
        assert_eq!(induced_count(&big(7), 3, 2, 1, 1, B).unwrap(), 2);
    }

    #[test]
    fn shifted_qr_examples() {
        assert_eq!(shifted_qr_card(&big(1), 3, 1).unwrap(), 2);
        assert_eq!(shifted_qr_card(&big(2), 3, 1).unwrap(), 1);
        assert_eq!(shifted_qr_card(&big(1), 5, 1).unwrap(), 3);
        assert_eq!(
            shifted_qr_card(&big(3), 3, 1).unwrap_err(),
            Error::CommonFactor(big(3))
        );
    }

    #[test]
    fn shifted_qr_matches_brute_force() {
        for r in [3u64, 5, 7] {
            for e in 1..=3u32 {
                let rho = r.pow(e);
                let squares: std::collections::HashSet<u64> =
                    (0..rho).map(|x| mulmod_u64(x, x, rho)).collect();
                for t in 1..20u64 {
                    if t % r == 0 {
                        continue;
                    }
                    let brute = (0..rho)
                        .filter(|&x| {
                            squares.contains(&((mulmod_u64(x, x, rho) + rho - t % rho) % rho))
                        })
                        .count() as u64;
                    assert_eq!(
                        shifted_qr_card(&big(t as u128), r, e).unwrap(),
                        brute,
                        "t={t} r={r} e={e}"
                    );
                }
            }
        }
    }

    #[test]
    fn factored_modulus_validation() {
        assert!(FactoredModulus::from_primes([5, 3]).is_err());
        assert!(FactoredModulus::from_primes([4]).is_err());
        assert!(FactoredModulus::from_factors(vec![(3, 0)]).is_err());
        let m = FactoredModulus::from_factors(vec![(2, 8), (3, 3), (5, 2)]).unwrap();
        assert_eq!(m.value(), &big(256 * 27 * 25));
        assert_eq!(m.omega(), 3);
        assert_eq!(m.phi(), &big(128 * 18 * 20));
        assert_eq!(m.describe(), "2^8*3^3*5^2");
        let empty = FactoredModulus::from_factors(vec![]).unwrap();
        assert_eq!(empty.value(), &BigUint::one());
    }

    #[test]
    fn factor_value_round_trips() {
        let m = FactoredModulus::factor_value(&big(4620), 1 << 20).unwrap();
        assert_eq!(m.describe(), "2^2*3*5*7*11");
        let m = FactoredModulus::factor_value(&big(55870214400), 1 << 20).unwrap();
        assert_eq!(m.describe(), "2^8*3^3*5^2*7*11*13*17*19");
    }

    #[test]
    fn negation_closure_holds() {
        for (n, m, k) in [(7909787u128, 105u64, 1u64), (17, 256, 3), (101, 297, 7)] {
            let set = sieve_enumerate(&big(n), m, k, B).unwrap();
            for &s in &set {
                assert!(
                    set.binary_search(&((m - s) % m)).is_ok(),
                    "negation of {s} missing mod {m}"
                );
            }
        }
    }
}
