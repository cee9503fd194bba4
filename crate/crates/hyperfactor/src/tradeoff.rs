//! Meet-in-the-middle time-space tradeoff over a split modulus.
//!
//! Write `M = m1 * m2` with coprime halves. Every element of the shifted
//! sieve set modulo `M` decomposes as `α1 + α2 (mod M)` where `α1` ranges
//! over the CRT lifts of `L̄_{m1}` that vanish modulo `m2`, and `α2` over the
//! mirrored lifts. Sorting both lists turns "which sums land below the search
//! bound" into two binary-searched intervals per `α1`, so only candidates
//! below `Lambda` ever reach the square test. The price is holding both lists
//! in memory.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::crt::CrtEnumerator;
use crate::error::{Error, Result};
use crate::fermat::{
    build_modulus, CandidateChecker, FactorReport, FermatConfig, FermatOutcome, FermatParams,
};
use crate::num::{mod_inverse, next_prime_u64};
use crate::sieve::{build_sieve_set, sieve_cardinality, FactoredModulus};
use crate::Budgets;

/// A modulus split into coprime halves for the meet-in-the-middle scan.
#[derive(Debug, Clone)]
pub struct SplitModulus {
    m1: FactoredModulus,
    m2: FactoredModulus,
    product: BigUint,
}

impl SplitModulus {
    pub fn new(m1: FactoredModulus, m2: FactoredModulus) -> Result<Self> {
        let g = m1.value().gcd(m2.value());
        if !g.is_one() {
            return Err(Error::NotCoprime(g));
        }
        let product = m1.value() * m2.value();
        Ok(SplitModulus { m1, m2, product })
    }

    pub fn m1(&self) -> &FactoredModulus {
        &self.m1
    }

    pub fn m2(&self) -> &FactoredModulus {
        &self.m2
    }

    /// `M = m1 * m2`.
    pub fn product(&self) -> &BigUint {
        &self.product
    }

    /// All prime-power factors of `M`, for reporting.
    pub fn combined(&self) -> Result<FactoredModulus> {
        let mut factors: Vec<(u64, u32)> = self
            .m1
            .factors()
            .iter()
            .chain(self.m2.factors())
            .map(|f| (f.prime, f.exp))
            .collect();
        factors.sort_unstable();
        FactoredModulus::from_factors(factors)
    }
}

/// The sorted lift lists `N1` and `N2`.
#[derive(Debug, Clone)]
pub struct MeetLists {
    pub n1: Vec<BigUint>,
    pub n2: Vec<BigUint>,
}

/// Smallest `w` with `m << w >= lambda`, i.e. `ceil(log2(lambda / m))`.
fn fill_exponent(lambda: &BigUint, m: &BigUint) -> u32 {
    let mut w = 0u32;
    while &(m << w) < lambda {
        w += 1;
    }
    w
}

/// Choose the split: start from the single-modulus choice for `lambda`,
/// move its largest prime out of `m1`, and take for `m2` the
/// `ceil(log2(lambda / m1))` primes following `m1`'s largest. Repeat the
/// removal until the exact list cardinalities balance (`|N2|` at least half
/// of `|N1|`), keeping the last split that fit the memory budget.
pub fn split_modulus(
    lambda: &BigUint,
    n: &BigUint,
    k: &BigUint,
    tuned: bool,
    budgets: &Budgets,
) -> Result<SplitModulus> {
    let start = build_modulus(lambda, n, Some(k), tuned)?;
    let budget = BigUint::from(budgets.meet_elements);

    let mut m1 = if start.omega() <= 1 {
        start.clone()
    } else {
        start.without_largest_prime()?
    };
    let mut last_valid: Option<SplitModulus> = None;
    loop {
        let omega2 = fill_exponent(lambda, m1.value()).max(1);
        let mut m2_primes = Vec::with_capacity(omega2 as usize);
        let mut p = m1.largest_prime().unwrap_or(2);
        for _ in 0..omega2 {
            p = next_prime_u64(p);
            m2_primes.push(p);
        }
        let m2 = FactoredModulus::from_primes(m2_primes)?;
        let split = SplitModulus::new(m1.clone(), m2)?;
        debug_assert!(split.product() > lambda);

        let n1 = sieve_cardinality(n, split.m1(), k)?;
        let n2 = sieve_cardinality(n, split.m2(), k)?;
        let within_budget = &n1 + &n2 <= budget;
        if within_budget {
            last_valid = Some(split);
            if BigUint::from(2u32) * &n2 >= n1 {
                return Ok(last_valid.unwrap());
            }
        }
        if m1.omega() <= 1 {
            break;
        }
        m1 = m1.without_largest_prime()?;
    }
    last_valid.ok_or(Error::BudgetExceeded {
        what: "meet-in-the-middle lists",
        requested: budgets.meet_elements,
        limit: budgets.meet_elements,
    })
}

/// Build the sorted lift lists for a split.
///
/// Per factor of `m1`, the shifted residues stream through the CRT
/// enumerator; each emitted `x1` lifts to `x1 * (m2 * (m2^{-1} mod m1))
/// (mod M)`, the element of `Z_M` that matches `x1` modulo `m1` and vanishes
/// modulo `m2`. Memory is exactly the two list lengths.
pub fn build_meet_lists(
    n: &BigUint,
    split: &SplitModulus,
    k: &BigUint,
    shift: &BigUint,
    budgets: &Budgets,
) -> Result<MeetLists> {
    let m = split.product();
    let card1 = sieve_cardinality(n, split.m1(), k)?;
    let card2 = sieve_cardinality(n, split.m2(), k)?;
    if &card1 + &card2 > BigUint::from(budgets.meet_elements) {
        return Err(Error::BudgetExceeded {
            what: "meet-in-the-middle lists",
            requested: (&card1 + &card2).to_u64().unwrap_or(u64::MAX),
            limit: budgets.meet_elements,
        });
    }

    let lift = |own: &FactoredModulus, other: &FactoredModulus| -> Result<Vec<BigUint>> {
        let basis = other.value() * mod_inverse(&(other.value() % own.value()), own.value())?;
        let set = build_sieve_set(n, own.clone(), k, shift, budgets.per_factor)?;
        let mut out = Vec::with_capacity(set.cardinality().to_usize().unwrap_or(0));
        let mut stream = CrtEnumerator::prepare(set.crt_classes())?;
        while let Some(x) = stream.advance() {
            out.push(x * &basis % m);
        }
        out.sort_unstable();
        Ok(out)
    };
    let n1 = lift(split.m1(), split.m2())?;
    let n2 = lift(split.m2(), split.m1())?;
    debug_assert_eq!(BigUint::from(n1.len()), card1);
    debug_assert_eq!(BigUint::from(n2.len()), card2);
    Ok(MeetLists { n1, n2 })
}

/// The two wrap-aware search windows for a fixed `α1`: indices of `N2`
/// holding `α2` with `α1 + α2 (mod M) < lambda`.
fn survivor_ranges(
    n2: &[BigUint],
    alpha1: &BigUint,
    m: &BigUint,
    lambda: &BigUint,
) -> [(usize, usize); 2] {
    let mut ranges = [(0, 0), (0, 0)];
    // 0 <= α2 < Λ - α1
    if alpha1 < lambda {
        let upper = lambda - alpha1;
        ranges[0] = (0, n2.partition_point(|x| x < &upper));
    }
    // M - α1 <= α2 < min(M, M - α1 + Λ)
    if !alpha1.is_zero() {
        let lower = m - alpha1;
        let upper = (&lower + lambda).min(m.clone());
        ranges[1] = (
            n2.partition_point(|x| x < &lower),
            n2.partition_point(|x| x < &upper),
        );
    }
    ranges
}

/// Count the candidates the interval scan would visit, without square
/// tests: `|{s in L̄_M : s mod M < lambda}|` by the CRT bijection.
pub fn count_survivors(lists: &MeetLists, m: &BigUint, lambda: &BigUint) -> u64 {
    let mut count = 0u64;
    for alpha1 in &lists.n1 {
        for (lo, hi) in survivor_ranges(&lists.n2, alpha1, m, lambda) {
            count += (hi - lo) as u64;
        }
    }
    count
}

fn scan_chunk(
    params: &FermatParams,
    checker: &CandidateChecker,
    n1: &[BigUint],
    n2: &[BigUint],
    m: &BigUint,
    stop: Option<&AtomicBool>,
) -> (Option<(BigUint, BigUint, BigUint)>, u64) {
    let lambda = params.lambda();
    let mut tests = 0u64;
    for alpha1 in n1 {
        if let Some(flag) = stop {
            if flag.load(AtomicOrdering::Relaxed) {
                break;
            }
        }
        for (which, (lo, hi)) in survivor_ranges(n2, alpha1, m, lambda).into_iter().enumerate() {
            for alpha2 in &n2[lo..hi] {
                let mut alpha = alpha1 + alpha2;
                if which == 1 {
                    alpha -= m;
                }
                tests += 1;
                if let Some(y) = checker.check(&alpha) {
                    if let Some(divisor) = crate::fermat::factor_from_hit(params, &alpha, y.clone())
                    {
                        return (Some((divisor, alpha, y)), tests);
                    }
                }
            }
        }
    }
    (None, tests)
}

/// Algorithm entry point: split the modulus, build the lists, and scan the
/// two intervals per `α1` in ascending order.
pub fn factor_tradeoff(
    n: &BigUint,
    lambda: &BigUint,
    config: &FermatConfig,
) -> Result<FermatOutcome> {
    if (n % 2u32).is_zero() {
        return Err(Error::EvenInput(n.clone()));
    }
    let k_hint = &config.a * &config.b;
    let split = match split_modulus(lambda, n, &k_hint, config.tuned, &config.budgets) {
        Ok(s) => s,
        Err(Error::CommonFactor(g)) if &g < n && (n % &g).is_zero() => {
            let cofactor = n / &g;
            let (divisor, cofactor) = if g <= cofactor { (g, cofactor) } else { (cofactor, g) };
            return Ok(FermatOutcome::Factored(FactorReport {
                divisor,
                cofactor,
                z: None,
                y: None,
                square_tests: 0,
                modulus_used: FactoredModulus::from_factors(vec![])?,
                gcd_hit: true,
            }));
        }
        Err(e) => return Err(e),
    };
    factor_tradeoff_with_split(n, lambda, &split, config)
}

/// The scan with an explicit split, for reproduction runs.
pub fn factor_tradeoff_with_split(
    n: &BigUint,
    lambda: &BigUint,
    split: &SplitModulus,
    config: &FermatConfig,
) -> Result<FermatOutcome> {
    let combined = split.combined()?;
    let params = FermatParams::new(n, &config.a, &config.b, lambda, combined)?;
    if let Some(p) = params.modulus().common_prime(n) {
        let p_big = BigUint::from(p);
        if p_big == *n {
            return Err(Error::LikelyPrime(n.clone()));
        }
        let cofactor = n / &p_big;
        let (divisor, cofactor) = if p_big <= cofactor {
            (p_big, cofactor)
        } else {
            (cofactor, p_big)
        };
        return Ok(FermatOutcome::Factored(FactorReport {
            divisor,
            cofactor,
            z: None,
            y: None,
            square_tests: 0,
            modulus_used: params.modulus().clone(),
            gcd_hit: true,
        }));
    }

    let lists = build_meet_lists(n, split, params.k(), params.shift(), &config.budgets)?;
    let four_abn = BigUint::from(4u32) * &config.a * &config.b * n;
    let checker = CandidateChecker::new(params.shift(), &four_abn, split.product());
    let m = split.product();

    if config.workers <= 1 {
        let (hit, tests) = scan_chunk(&params, &checker, &lists.n1, &lists.n2, m, None);
        return Ok(finish(&params, hit, tests));
    }

    let chunk = lists.n1.len().div_ceil(config.workers).max(1);
    let stop = AtomicBool::new(false);
    let total = AtomicU64::new(0);
    let winner: Mutex<Option<(BigUint, BigUint, BigUint)>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for piece in lists.n1.chunks(chunk) {
            let (params, checker, n2, m) = (&params, &checker, &lists.n2, &m);
            let (stop, total, winner) = (&stop, &total, &winner);
            scope.spawn(move || {
                let (hit, tests) = scan_chunk(params, checker, piece, n2, m, Some(stop));
                total.fetch_add(tests, AtomicOrdering::Relaxed);
                if let Some(h) = hit {
                    *winner.lock().unwrap() = Some(h);
                    stop.store(true, AtomicOrdering::Relaxed);
                }
            });
        }
    });
    let tests = total.load(AtomicOrdering::Relaxed);
    Ok(finish(&params, winner.into_inner().unwrap(), tests))
}

fn finish(
    params: &FermatParams,
    hit: Option<(BigUint, BigUint, BigUint)>,
    square_tests: u64,
) -> FermatOutcome {
    match hit {
        Some((divisor, z, y)) => FermatOutcome::Factored(crate::fermat::verified_report(
            params,
            divisor,
            z,
            y,
            square_tests,
        )),
        None => FermatOutcome::LambdaTooSmall { square_tests },
    }
}

/// Heuristic survivor estimate `|L_m| / 2^{ω(M/m)}` as an exact rational:
/// every prime class added on top of `m` cuts the candidates below a fixed
/// bound roughly in half. Reported alongside measured counts, never used for
/// correctness.
pub fn survivor_estimate(
    n: &BigUint,
    k: &BigUint,
    m: &FactoredModulus,
    big: &FactoredModulus,
) -> Result<BigRational> {
    let mut omega_quotient = 0u32;
    for f in big.factors() {
        match m.factors().iter().find(|g| g.prime == f.prime) {
            None => omega_quotient += 1,
            Some(g) if g.exp < f.exp => omega_quotient += 1,
            Some(g) if g.exp > f.exp => {
                return Err(Error::NotADivisor(m.value().clone(), big.value().clone()))
            }
            Some(_) => {}
        }
    }
    for f in m.factors() {
        if !big.factors().iter().any(|g| g.prime == f.prime) {
            return Err(Error::NotADivisor(m.value().clone(), big.value().clone()));
        }
    }
    let card = sieve_cardinality(n, m, k)?;
    Ok(BigRational::new(
        BigInt::from(card),
        BigInt::one() << omega_quotient,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::sieve_enumerate;

    fn big(n: u128) -> BigUint {
        BigUint::from(n)
    }

    const N: u128 = 7909787;

    #[test]
    fn split_modulus_small_example() {
        let split = split_modulus(
            &big(280),
            &big(N),
            &BigUint::one(),
            false,
            &Budgets::default(),
        )
        .unwrap();
        assert_eq!(split.m1().value(), &big(105));
        assert_eq!(split.m2().value(), &big(143));
        assert_eq!(split.product(), &big(15015));
    }

    #[test]
    fn split_modulus_degenerate() {
        let split = split_modulus(
            &big(2),
            &big(N),
            &BigUint::one(),
            false,
            &Budgets::default(),
        )
        .unwrap();
        // start = {3}: no prime to move, next single prime becomes m2
        assert_eq!(split.m1().value(), &big(3));
        assert_eq!(split.m2().value(), &big(5));
    }

    #[test]
    fn meet_lists_structure() {
        let split = split_modulus(
            &big(280),
            &big(N),
            &BigUint::one(),
            false,
            &Budgets::default(),
        )
        .unwrap();
        let l = crate::num::ceil_sqrt(&big(4 * N));
        let lists =
            build_meet_lists(&big(N), &split, &BigUint::one(), &l, &Budgets::default()).unwrap();
        assert_eq!(lists.n1.len(), 8); // |L_3| * |L_5| * |L_7| = 1 * 2 * 4
        assert_eq!(lists.n2.len(), 30); // |L_11| * |L_13| = 5 * 6
        for x in &lists.n1 {
            assert!((x % split.m2().value()).is_zero());
        }
        for x in &lists.n2 {
            assert!((x % split.m1().value()).is_zero());
        }
        assert!(lists.n1.windows(2).all(|w| w[0] < w[1]));
        assert!(lists.n2.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn factor_tradeoff_recovers_small_example() {
        let outcome =
            factor_tradeoff(&big(N), &big(280), &FermatConfig::default()).unwrap();
        let report = outcome.report().expect("factor expected");
        assert_eq!(report.divisor, big(2069));
        assert_eq!(report.z, Some(big(267)));
        assert_eq!(report.modulus_used.value(), &big(15015));
    }

    #[test]
    fn factor_tradeoff_sentinel() {
        let outcome = factor_tradeoff(&big(N), &big(10), &FermatConfig::default()).unwrap();
        assert!(matches!(outcome, FermatOutcome::LambdaTooSmall { .. }));
    }

    #[test]
    fn tradeoff_matches_brute_force_survivors() {
        // The interval scan must visit exactly the sieve elements below lambda.
        let n = big(101 * 149);
        let split = SplitModulus::new(
            FactoredModulus::from_primes([3, 5, 7]).unwrap(),
            FactoredModulus::from_primes([11, 13]).unwrap(),
        )
        .unwrap();
        let l = crate::num::ceil_sqrt(&(4u32 * &n));
        let lists =
            build_meet_lists(&n, &split, &BigUint::one(), &l, &Budgets::default()).unwrap();
        let m_val = split.product().to_u64().unwrap();
        for lambda in [1u64, 17, 100, 1000, 15014] {
            let counted = count_survivors(&lists, split.product(), &big(lambda as u128));
            let shift = (&l % m_val).to_u64().unwrap();
            let brute = sieve_enumerate(&n, m_val, 1, 1 << 24)
                .unwrap()
                .into_iter()
                .map(|s| (s + m_val - shift) % m_val)
                .filter(|s| *s < lambda)
                .count() as u64;
            assert_eq!(counted, brute, "lambda = {lambda}");
        }
    }

    #[test]
    fn survivor_estimate_examples() {
        let m = FactoredModulus::from_primes([3, 5, 7]).unwrap();
        let est = survivor_estimate(&big(N), &BigUint::one(), &m, &m).unwrap();
        assert_eq!(est, BigRational::from(BigInt::from(8)));

        let bigger = FactoredModulus::from_primes([3, 5, 7, 11]).unwrap();
        let est = survivor_estimate(&big(N), &BigUint::one(), &m, &bigger).unwrap();
        assert_eq!(est, BigRational::new(BigInt::from(8), BigInt::from(2)));

        let disjoint = FactoredModulus::from_primes([11, 13]).unwrap();
        assert!(matches!(
            survivor_estimate(&big(N), &BigUint::one(), &m, &disjoint),
            Err(Error::NotADivisor(..))
        ));
    }

    #[test]
    fn parallel_tradeoff_agrees() {
        let config = FermatConfig {
            workers: 3,
            ..FermatConfig::default()
        };
        let outcome = factor_tradeoff(&big(N), &big(280), &config).unwrap();
        let report = outcome.report().unwrap();
        assert_eq!(&report.divisor * &report.cofactor, big(N));
    }
}
