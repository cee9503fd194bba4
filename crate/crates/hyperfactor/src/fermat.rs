//! Sieve-improved Fermat/Lawrence factorization.
//!
//! To factor an odd `N`, search for `z` with `(z + L)^2 - 4abN = y^2` where
//! `L = ceil(2 sqrt(abN))`; then `gcd(z + L - y, N)` is a proper factor. The
//! offset `z` lies below `Lambda_{a,b}`, the minimal value of
//! `(au - bv)^2 / (4 sqrt(abN))` over nontrivial decompositions `N = uv`.
//! Instead of scanning every candidate below a bound `Lambda`, pick a highly
//! composite modulus `m > Lambda` and stream only the candidates in the
//! shifted sieve set `L̄_m`, a vanishing fraction of the interval. The
//! streaming CRT enumerator keeps memory at the size of the per-factor
//! residue lists.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::crt::CrtEnumerator;
use crate::error::{Error, Result};
use crate::num::{ceil_sqrt, is_square, is_square_u128, isqrt, next_prime_u64};
use crate::sieve::{
    build_sieve_set, card_prime_power_value, FactoredModulus, PrimePower,
};
use crate::Budgets;

/// Parameters of one sieve-improved Fermat scan.
#[derive(Debug, Clone)]
pub struct FermatParams {
    n: BigUint,
    a: BigUint,
    b: BigUint,
    lambda: BigUint,
    l: BigUint,
    k: BigUint,
    modulus: FactoredModulus,
}

impl FermatParams {
    /// Validate inputs and precompute `L = ceil(2 sqrt(abN))` and
    /// `k = ab mod m`.
    ///
    /// Rejects even `N`, moduli not exceeding `lambda`, and multipliers
    /// sharing a factor with `m` or `N` (the sieve cannot be applied to
    /// multipliers divisible by the modulus primes).
    pub fn new(
        n: &BigUint,
        a: &BigUint,
        b: &BigUint,
        lambda: &BigUint,
        modulus: FactoredModulus,
    ) -> Result<Self> {
        if (n % 2u32).is_zero() {
            return Err(Error::EvenInput(n.clone()));
        }
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidInput("multipliers must be at least 1".into()));
        }
        if modulus.value() <= lambda {
            return Err(Error::InvalidInput(format!(
                "modulus {} does not exceed lambda {lambda}",
                modulus.value()
            )));
        }
        let ab = a * b;
        if let Some(p) = modulus.common_prime(&ab) {
            return Err(Error::InvalidInput(format!(
                "multiplier product shares prime {p} with the modulus"
            )));
        }
        let g = ab.gcd(n);
        if !g.is_one() {
            return Err(Error::InvalidInput(format!(
                "multiplier product shares factor {g} with N"
            )));
        }
        let l = ceil_sqrt(&(BigUint::from(4u32) * &ab * n));
        let k = &ab % modulus.value();
        Ok(FermatParams {
            n: n.clone(),
            a: a.clone(),
            b: b.clone(),
            lambda: lambda.clone(),
            l,
            k,
            modulus,
        })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    /// `L = ceil(2 sqrt(abN))`, the base point of the offset search.
    pub fn shift(&self) -> &BigUint {
        &self.l
    }

    pub fn k(&self) -> &BigUint {
        &self.k
    }

    pub fn lambda(&self) -> &BigUint {
        &self.lambda
    }

    pub fn modulus(&self) -> &FactoredModulus {
        &self.modulus
    }
}

/// Outcome of one factorization run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    pub divisor: BigUint,
    pub cofactor: BigUint,
    /// Offset with `(z + L)^2 - 4abN = y^2`; unset for gcd hits.
    pub z: Option<BigUint>,
    pub y: Option<BigUint>,
    /// Candidates fed to the square test. Deterministic for single-worker
    /// runs; approximate when sharded.
    pub square_tests: u64,
    pub modulus_used: FactoredModulus,
    /// Set when the factor fell out of the `gcd(N, m)` screen instead of the
    /// square scan.
    pub gcd_hit: bool,
}

/// Either a verified factor or the sentinel saying the search bound was too
/// small for any decomposition of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FermatOutcome {
    Factored(FactorReport),
    LambdaTooSmall { square_tests: u64 },
}

impl FermatOutcome {
    pub fn report(&self) -> Option<&FactorReport> {
        match self {
            FermatOutcome::Factored(r) => Some(r),
            FermatOutcome::LambdaTooSmall { .. } => None,
        }
    }
}

/// Knobs for the factorization drivers.
#[derive(Debug, Clone)]
pub struct FermatConfig {
    pub a: BigUint,
    pub b: BigUint,
    /// Tune the modulus with prime powers instead of a bare odd primorial.
    pub tuned: bool,
    /// Candidate-stream shards scanned in parallel; 1 keeps counts exact.
    pub workers: usize,
    pub budgets: Budgets,
}

impl Default for FermatConfig {
    fn default() -> Self {
        FermatConfig {
            a: BigUint::one(),
            b: BigUint::one(),
            tuned: false,
            workers: 1,
            budgets: Budgets::default(),
        }
    }
}

/// Exact value of `Lambda_{a,b} = min (au - bv)^2 / (4 sqrt(abN))` over
/// nontrivial decompositions `N = uv`, kept as the pair
/// `(min (au-bv)^2, abN)` so comparisons against integers stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaBound {
    diff_sq: BigUint,
    ab_n: BigUint,
}

impl LambdaBound {
    /// Exact three-way comparison of the bound against an integer:
    /// `d^2/(4 sqrt(abN)) <=> t` iff `d^4 <=> 16 t^2 abN`.
    pub fn cmp_integer(&self, t: &BigUint) -> Ordering {
        let lhs = &self.diff_sq * &self.diff_sq;
        let rhs = BigUint::from(16u32) * t * t * &self.ab_n;
        lhs.cmp(&rhs)
    }

    /// Smallest integer strictly above the bound; a sufficient `lambda` for
    /// a guaranteed factorization.
    pub fn smallest_sufficient(&self) -> BigUint {
        let d4 = &self.diff_sq * &self.diff_sq;
        let floor = isqrt(&(d4 / (BigUint::from(16u32) * &self.ab_n)));
        floor + 1u32
    }

    pub fn is_zero(&self) -> bool {
        self.diff_sq.is_zero()
    }

    /// Floating-point approximation for display.
    pub fn approx(&self) -> f64 {
        let d = self.diff_sq.to_f64().unwrap_or(f64::INFINITY);
        let x = self.ab_n.to_f64().unwrap_or(f64::INFINITY);
        d / (4.0 * x.sqrt())
    }
}

/// Compute [`LambdaBound`] from the full divisor list of `N`.
///
/// A test-scale oracle: without a supplied divisor list it factors `N` by
/// trial division, refusing inputs above `10^12`. Fails with
/// [`Error::DivisorsUnavailable`] when `N` has no nontrivial decomposition.
pub fn lambda_bound(
    n: &BigUint,
    a: &BigUint,
    b: &BigUint,
    divisors: Option<&[BigUint]>,
) -> Result<LambdaBound> {
    let divs: Vec<BigUint> = match divisors {
        Some(d) => d.to_vec(),
        None => {
            let limit = BigUint::from(10u64.pow(12));
            let Some(small) = n.to_u64().filter(|_| n <= &limit) else {
                return Err(Error::DivisorsUnavailable(n.clone()));
            };
            divisors_u64(small).into_iter().map(BigUint::from).collect()
        }
    };
    let one = BigUint::one();
    let mut best: Option<BigUint> = None;
    for u in &divs {
        if u == &one || u == n {
            continue;
        }
        let v = n / u;
        let au = a * u;
        let bv = b * &v;
        let diff = if au >= bv { &au - &bv } else { &bv - &au };
        let diff_sq = &diff * &diff;
        if best.as_ref().is_none_or(|b| &diff_sq < b) {
            best = Some(diff_sq);
        }
    }
    match best {
        Some(diff_sq) => Ok(LambdaBound {
            diff_sq,
            ab_n: a * b * n,
        }),
        None => Err(Error::DivisorsUnavailable(n.clone())),
    }
}

fn divisors_u64(n: u64) -> Vec<u64> {
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in factors {
        let snapshot = divs.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            divs.extend(snapshot.iter().map(|d| d * pe));
        }
    }
    divs.sort_unstable();
    divs
}

/// Modulus selection for a target bound `lambda`.
///
/// Untuned: the product of odd primes `3*5*7*...` with the minimal cutoff
/// that pushes the value past `lambda`. Tuned: exponent-tune 3, 5, 7 while a
/// level costs less than half its size in density, append further odd primes
/// while ample fill room remains, fill the remaining gap with a power of two,
/// then trade top two-levels for odd-prime levels whenever that wins per bit.
pub fn build_modulus(
    lambda: &BigUint,
    n: &BigUint,
    k_hint: Option<&BigUint>,
    tuned: bool,
) -> Result<FactoredModulus> {
    if tuned {
        let k = k_hint.cloned().unwrap_or_else(BigUint::one);
        build_modulus_tuned(lambda, n, &k)
    } else {
        build_modulus_untuned(lambda)
    }
}

fn build_modulus_untuned(lambda: &BigUint) -> Result<FactoredModulus> {
    let mut primes = Vec::new();
    let mut value = BigUint::one();
    let mut p = 3u64;
    while value <= *lambda {
        primes.push(p);
        value *= p;
        p = next_prime_u64(p);
    }
    if primes.is_empty() {
        primes.push(3);
    }
    FactoredModulus::from_primes(primes)
}

/// Density cost of raising one prime to its next level, as
/// `card(next) / (card(current) * growth)` in log space per bit of modulus.
fn per_bit_cost(card_next: u64, card_cur: u64, growth: u64) -> f64 {
    let factor = card_next as f64 / (card_cur as f64 * growth as f64);
    factor.ln() / (growth as f64).log2()
}

fn build_modulus_tuned(lambda: &BigUint, n: &BigUint, k: &BigUint) -> Result<FactoredModulus> {
    if (n % 2u32).is_zero() || (k % 2u32).is_zero() {
        return Err(Error::EvenInput(n.clone()));
    }
    let card_odd = |r: u64, e: u32| -> Result<u64> {
        let k_red = (k % r.pow(e)).to_u64().unwrap();
        card_prime_power_value(n, PrimePower { prime: r, exp: e }, k_red)
    };
    // k reduced modulo 2^e stays odd; the two-power table only reads k mod 8.
    let k_two = (k % 8u32).to_u64().unwrap();
    let card_two = |e: u32| -> Result<u64> {
        if e == 0 {
            Ok(1)
        } else {
            card_prime_power_value(n, PrimePower { prime: 2, exp: e }, k_two)
        }
    };

    // Exponent-tune 3, 5, 7: raise while the next level multiplies the
    // density by strictly less than 1/2, the asymptotic cost of appending
    // any fresh prime.
    let mut exps = [(3u64, 1u32), (5, 1), (7, 1)];
    let mut m_odd = BigUint::from(3u64 * 5 * 7);
    for (r, e) in &mut exps {
        loop {
            let cur = card_odd(*r, *e)?;
            let next = card_odd(*r, *e + 1)?;
            if 2 * next < *r * cur {
                *e += 1;
                m_odd *= *r;
            } else {
                break;
            }
        }
    }

    // Append fresh odd primes while at least six doublings of fill room
    // remain; the low two-power levels are the cheapest filler available, so
    // reserve space for them.
    let mut appended = Vec::new();
    let mut p = 11u64;
    while &m_odd * p * 64u32 <= *lambda {
        appended.push(p);
        m_odd *= p;
        p = next_prime_u64(p);
    }

    // Fill the remaining gap with a power of two.
    let refill = |m_odd: &BigUint| -> u32 {
        let mut c = 0u32;
        while (m_odd << c) <= *lambda {
            c += 1;
        }
        c
    };
    let mut c = refill(&m_odd);

    // Rebalance: drop the top two two-levels for one odd-prime level when the
    // odd level is cheaper per bit of modulus.
    while c >= 2 {
        let pair_cost = per_bit_cost(card_two(c)?, card_two(c - 2)?, 4);
        let mut best: Option<(f64, usize)> = None;
        for (idx, (r, e)) in exps.iter().enumerate() {
            let cost = per_bit_cost(card_odd(*r, *e + 1)?, card_odd(*r, *e)?, *r);
            if best.is_none_or(|(bc, _)| cost < bc) {
                best = Some((cost, idx));
            }
        }
        match best {
            Some((cost, idx)) if cost < pair_cost => {
                exps[idx].1 += 1;
                m_odd *= exps[idx].0;
                c = refill(&m_odd);
            }
            _ => break,
        }
    }

    let mut factors = Vec::new();
    if c >= 1 {
        factors.push((2u64, c));
    }
    for (r, e) in exps {
        factors.push((r, e));
    }
    for p in appended {
        factors.push((p, 1));
    }
    FactoredModulus::from_factors(factors)
}

/// Square test for `(i + L)^2 - 4abN`, with a register-width fast path when
/// every quantity the scan can produce fits in `u128`.
pub(crate) enum CandidateChecker {
    Small { l: u64, four_abn: u128 },
    Big { l: BigUint, four_abn: BigUint },
}

impl CandidateChecker {
    pub(crate) fn new(l: &BigUint, four_abn: &BigUint, modulus: &BigUint) -> Self {
        if let (Some(lu), Some(fu), Some(mu)) = (l.to_u64(), four_abn.to_u128(), modulus.to_u64())
        {
            if lu.checked_add(mu).is_some() {
                return CandidateChecker::Small {
                    l: lu,
                    four_abn: fu,
                };
            }
        }
        CandidateChecker::Big {
            l: l.clone(),
            four_abn: four_abn.clone(),
        }
    }

    /// Returns `y` when `(i + L)^2 - 4abN` is a perfect square.
    pub(crate) fn check(&self, i: &BigUint) -> Option<BigUint> {
        match self {
            CandidateChecker::Small { l, four_abn } => {
                let s = (i.to_u64().expect("candidate below modulus") + l) as u128;
                is_square_u128(s * s - four_abn).map(BigUint::from)
            }
            CandidateChecker::Big { l, four_abn } => {
                let s = i + l;
                is_square(&(&s * &s - four_abn))
            }
        }
    }
}

fn ordered_pair(n: &BigUint, divisor: BigUint) -> (BigUint, BigUint) {
    let cofactor = n / &divisor;
    if divisor <= cofactor {
        (divisor, cofactor)
    } else {
        (cofactor, divisor)
    }
}

/// Soundness check run on every non-gcd return path.
pub(crate) fn verified_report(
    params: &FermatParams,
    divisor: BigUint,
    z: BigUint,
    y: BigUint,
    square_tests: u64,
) -> FactorReport {
    let (divisor, cofactor) = ordered_pair(&params.n, divisor);
    assert!(
        !divisor.is_one() && divisor < params.n && &divisor * &cofactor == params.n,
        "factor candidate failed verification"
    );
    let s = &z + &params.l;
    assert_eq!(
        &s * &s - BigUint::from(4u32) * &params.a * &params.b * &params.n,
        &y * &y,
        "offset equation failed verification"
    );
    FactorReport {
        divisor,
        cofactor,
        z: Some(z),
        y: Some(y),
        square_tests,
        modulus_used: params.modulus.clone(),
        gcd_hit: false,
    }
}

/// Interpret a square hit at candidate `i`: a proper `gcd(i + L - y, N)`,
/// with the perfect-square special case when `y = 0`.
pub(crate) fn factor_from_hit(params: &FermatParams, i: &BigUint, y: BigUint) -> Option<BigUint> {
    let s = i + &params.l;
    let g = if s >= y { (&s - &y).gcd(&params.n) } else { BigUint::zero() };
    if !g.is_one() && !g.is_zero() && g < params.n {
        return Some(g);
    }
    if y.is_zero() {
        if let Some(root) = is_square(&params.n) {
            if !root.is_one() {
                return Some(root);
            }
        }
    }
    None
}

/// Run the sieve-improved scan with an explicit modulus.
///
/// Streams the shifted set `L̄_m` through the CRT enumerator without ever
/// materializing it, square-testing each candidate. A candidate is accepted
/// only if its gcd yields a proper factor, so spurious squares are skipped
/// rather than reported.
pub fn factor_with_params(params: &FermatParams, config: &FermatConfig) -> Result<FermatOutcome> {
    if let Some(p) = params.modulus.common_prime(&params.n) {
        let p_big = BigUint::from(p);
        if p_big == params.n {
            return Err(Error::LikelyPrime(params.n.clone()));
        }
        let (divisor, cofactor) = ordered_pair(&params.n, p_big);
        return Ok(FermatOutcome::Factored(FactorReport {
            divisor,
            cofactor,
            z: None,
            y: None,
            square_tests: 0,
            modulus_used: params.modulus.clone(),
            gcd_hit: true,
        }));
    }

    let set = build_sieve_set(
        &params.n,
        params.modulus.clone(),
        &params.k,
        &params.l,
        config.budgets.per_factor,
    )?;
    let four_abn = BigUint::from(4u32) * &params.a * &params.b * &params.n;
    let checker = CandidateChecker::new(&params.l, &four_abn, params.modulus.value());

    if config.workers <= 1 {
        let mut enumerator = CrtEnumerator::prepare(set.crt_classes())?;
        let mut square_tests = 0u64;
        while let Some(i) = enumerator.advance() {
            square_tests += 1;
            if let Some(y) = checker.check(i) {
                if let Some(divisor) = factor_from_hit(params, i, y.clone()) {
                    let z = i.clone();
                    return Ok(FermatOutcome::Factored(verified_report(
                        params,
                        divisor,
                        z,
                        y,
                        square_tests,
                    )));
                }
            }
        }
        return Ok(FermatOutcome::LambdaTooSmall { square_tests });
    }

    let shards = CrtEnumerator::prepare_sharded(set.crt_classes(), config.workers)?;
    let found = AtomicBool::new(false);
    let tests = AtomicU64::new(0);
    let hit: Mutex<Option<(BigUint, BigUint, BigUint)>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for mut shard in shards {
            let found = &found;
            let tests = &tests;
            let hit = &hit;
            let checker = &checker;
            scope.spawn(move || {
                let mut local = 0u64;
                while let Some(i) = shard.advance() {
                    local += 1;
                    if local.is_multiple_of(1024) && found.load(AtomicOrdering::Relaxed) {
                        break;
                    }
                    if let Some(y) = checker.check(i) {
                        if let Some(divisor) = factor_from_hit(params, i, y.clone()) {
                            *hit.lock().unwrap() = Some((divisor, i.clone(), y));
                            found.store(true, AtomicOrdering::Relaxed);
                            break;
                        }
                    }
                }
                tests.fetch_add(local, AtomicOrdering::Relaxed);
            });
        }
    });
    let square_tests = tests.load(AtomicOrdering::Relaxed);
    match hit.into_inner().unwrap() {
        Some((divisor, z, y)) => Ok(FermatOutcome::Factored(verified_report(
            params,
            divisor,
            z,
            y,
            square_tests,
        ))),
        None => Ok(FermatOutcome::LambdaTooSmall { square_tests }),
    }
}

/// Algorithm entry point: build the modulus for `lambda`, screen for shared
/// primes, then scan.
pub fn factor_with_lambda(
    n: &BigUint,
    lambda: &BigUint,
    config: &FermatConfig,
) -> Result<FermatOutcome> {
    if (n % 2u32).is_zero() {
        return Err(Error::EvenInput(n.clone()));
    }
    let k_hint = &config.a * &config.b;
    let modulus = match build_modulus(lambda, n, Some(&k_hint), config.tuned) {
        Ok(m) => m,
        // Tuning evaluates cardinality formulas, which refuse moduli sharing
        // a prime with N; that refusal is itself a factor of N.
        Err(Error::CommonFactor(g)) if &g < n && (n % &g).is_zero() => {
            let (divisor, cofactor) = ordered_pair(n, g);
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
    let params = FermatParams::new(n, &config.a, &config.b, lambda, modulus)?;
    factor_with_params(&params, config)
}

/// Fully automatic mode: run with `a = b = 1` and moduli growing one odd
/// prime per round until a factor appears.
///
/// Each new prime is first screened against `N` directly. The largest value
/// `Lambda_{1,1}` can take for composite `N` is `(N/3 - 3)^2 / (4 sqrt(N))`,
/// so once the modulus exceeds that, a fruitless round proves `N` has no
/// nontrivial decomposition and the run gives up with
/// [`Error::LikelyPrime`].
pub fn factor_auto(n: &BigUint, config: &FermatConfig) -> Result<FactorReport> {
    if (n % 2u32).is_zero() {
        return Err(Error::EvenInput(n.clone()));
    }
    if n <= &BigUint::from(7u32) {
        return Err(Error::LikelyPrime(n.clone()));
    }
    if let Some(root) = is_square(n) {
        let config = FermatConfig {
            a: BigUint::one(),
            b: BigUint::one(),
            ..config.clone()
        };
        // z = 0, y = 0 solves the offset equation exactly for square N.
        let modulus = build_modulus(&BigUint::one(), n, None, false)?;
        let params = FermatParams::new(n, &config.a, &config.b, &BigUint::one(), modulus)?;
        return Ok(verified_report(
            &params,
            root,
            BigUint::zero(),
            BigUint::zero(),
            0,
        ));
    }

    // give-up threshold: m > (N/3 - 3)^2 / (4 sqrt N), i.e. 1296 m^2 N > (N-9)^4
    let n_minus_9 = n - 9u32;
    let give_up_rhs = (&n_minus_9 * &n_minus_9) * (&n_minus_9 * &n_minus_9);

    let mut primes: Vec<u64> = Vec::new();
    let mut m = BigUint::one();
    let mut p = 3u64;
    let mut total_tests = 0u64;
    loop {
        if (n % p).is_zero() {
            let p_big = BigUint::from(p);
            if &p_big == n {
                return Err(Error::LikelyPrime(n.clone()));
            }
            let (divisor, cofactor) = ordered_pair(n, p_big);
            return Ok(FactorReport {
                divisor,
                cofactor,
                z: None,
                y: None,
                square_tests: total_tests,
                modulus_used: FactoredModulus::from_primes(primes)?,
                gcd_hit: true,
            });
        }
        primes.push(p);
        m *= p;

        let modulus = FactoredModulus::from_primes(primes.clone())?;
        let lambda = &m - 1u32;
        let params = FermatParams::new(n, &BigUint::one(), &BigUint::one(), &lambda, modulus)?;
        match factor_with_params(&params, config)? {
            FermatOutcome::Factored(mut report) => {
                report.square_tests += total_tests;
                return Ok(report);
            }
            FermatOutcome::LambdaTooSmall { square_tests } => {
                total_tests += square_tests;
            }
        }
        if BigUint::from(1296u32) * &m * &m * n > give_up_rhs {
            return Err(Error::LikelyPrime(n.clone()));
        }
        p = next_prime_u64(p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u128) -> BigUint {
        BigUint::from(n)
    }

    const N: u128 = 7909787;

    #[test]
    fn lambda_bound_examples() {
        let lb = lambda_bound(&big(N), &BigUint::one(), &BigUint::one(), None).unwrap();
        // 267 < Lambda_{1,1} < 274 for N = 7909787 = 2069 * 3823
        assert_eq!(lb.cmp_integer(&big(267)), Ordering::Greater);
        assert_eq!(lb.cmp_integer(&big(273)), Ordering::Greater);
        assert_eq!(lb.cmp_integer(&big(274)), Ordering::Less);
        assert_eq!(lb.smallest_sufficient(), big(274));
        assert!((lb.approx() - 273.47).abs() < 0.01);

        let lb15 = lambda_bound(&big(15), &BigUint::one(), &BigUint::one(), None).unwrap();
        assert_eq!(lb15.cmp_integer(&big(0)), Ordering::Greater);
        assert_eq!(lb15.cmp_integer(&big(1)), Ordering::Less);
        assert!((lb15.approx() - 0.258).abs() < 0.001);

        let lb9 = lambda_bound(&big(9), &BigUint::one(), &BigUint::one(), None).unwrap();
        assert!(lb9.is_zero());
        assert_eq!(lb9.cmp_integer(&BigUint::zero()), Ordering::Equal);

        assert!(matches!(
            lambda_bound(&big(97), &BigUint::one(), &BigUint::one(), None),
            Err(Error::DivisorsUnavailable(_))
        ));
    }

    #[test]
    fn build_modulus_untuned_examples() {
        let m = build_modulus(&big(280), &big(N), None, false).unwrap();
        assert_eq!(m.value(), &big(1155));
        assert_eq!(m.largest_prime(), Some(11));
        let m = build_modulus(&BigUint::one(), &big(N), None, false).unwrap();
        assert_eq!(m.value(), &big(3));
    }

    #[test]
    fn build_modulus_tuned_small() {
        let m = build_modulus(&big(280), &big(N), Some(&BigUint::one()), true).unwrap();
        assert_eq!(m.describe(), "2^2*3*5*7");
        assert!(m.value() > &big(280));
    }

    #[test]
    fn factor_with_lambda_recovers_intro_example() {
        let outcome = factor_with_lambda(&big(N), &big(280), &FermatConfig::default()).unwrap();
        let report = outcome.report().expect("factor expected");
        assert_eq!(report.divisor, big(2069));
        assert_eq!(report.cofactor, big(3823));
        assert_eq!(report.z, Some(big(267)));
        assert_eq!(report.y, Some(big(1754)));
        assert!(!report.gcd_hit);
    }

    #[test]
    fn factor_with_lambda_sentinel_when_bound_too_small() {
        let outcome = factor_with_lambda(&big(N), &big(10), &FermatConfig::default()).unwrap();
        assert!(matches!(outcome, FermatOutcome::LambdaTooSmall { .. }));
    }

    #[test]
    fn factor_with_lambda_gcd_screen() {
        let outcome =
            factor_with_lambda(&big(15), &BigUint::one(), &FermatConfig::default()).unwrap();
        let report = outcome.report().unwrap();
        assert!(report.gcd_hit);
        assert_eq!(report.divisor, big(3));
        assert_eq!(report.cofactor, big(5));
        assert_eq!(report.z, None);
    }

    #[test]
    fn factor_rejects_even_input() {
        assert!(matches!(
            factor_with_lambda(&big(10), &big(4), &FermatConfig::default()),
            Err(Error::EvenInput(_))
        ));
    }

    #[test]
    fn factor_auto_examples() {
        let report = factor_auto(&big(N), &FermatConfig::default()).unwrap();
        assert_eq!(report.divisor, big(2069));
        assert_eq!(report.cofactor, big(3823));

        let report = factor_auto(&big(15), &FermatConfig::default()).unwrap();
        assert!(report.divisor == big(3) || report.divisor == big(5));

        assert!(matches!(
            factor_auto(&big(97), &FermatConfig::default()),
            Err(Error::LikelyPrime(_))
        ));
        assert!(matches!(
            factor_auto(&big(10), &FermatConfig::default()),
            Err(Error::EvenInput(_))
        ));
    }

    #[test]
    fn factor_auto_perfect_square() {
        let report = factor_auto(&big(9), &FermatConfig::default()).unwrap();
        assert_eq!(report.divisor, big(3));
        assert_eq!(report.z, Some(BigUint::zero()));
        let report = factor_auto(&big(2069 * 2069), &FermatConfig::default()).unwrap();
        assert_eq!(report.divisor, big(2069));
    }

    #[test]
    fn sharded_scan_agrees_with_sequential() {
        let sharded = FermatConfig {
            workers: 4,
            ..FermatConfig::default()
        };
        let outcome = factor_with_lambda(&big(N), &big(280), &sharded).unwrap();
        let report = outcome.report().unwrap();
        assert_eq!(&report.divisor * &report.cofactor, big(N));
        assert_eq!(report.z, Some(big(267)));
    }

    #[test]
    fn unsuccessful_scan_streams_whole_sieve_set() {
        // Candidate count of a fruitless pass equals the sieve-set cardinality.
        let modulus = build_modulus(&big(10), &big(N), None, false).unwrap();
        let params = FermatParams::new(
            &big(N),
            &BigUint::one(),
            &BigUint::one(),
            &big(10),
            modulus.clone(),
        )
        .unwrap();
        let set = build_sieve_set(
            &big(N),
            modulus,
            params.k(),
            params.shift(),
            Budgets::default().per_factor,
        )
        .unwrap();
        match factor_with_params(&params, &FermatConfig::default()).unwrap() {
            FermatOutcome::LambdaTooSmall { square_tests } => {
                assert_eq!(BigUint::from(square_tests), *set.cardinality());
            }
            other => panic!("expected sentinel, got {other:?}"),
        }
    }

    #[test]
    fn rejects_multiplier_sharing_modulus_prime() {
        let modulus = build_modulus(&big(100), &big(N), None, false).unwrap();
        assert!(FermatParams::new(&big(N), &big(3), &BigUint::one(), &big(100), modulus).is_err());
    }

    #[test]
    fn general_multipliers_work() {
        // b = 23 stays coprime to the modulus the bound calls for.
        let lb = lambda_bound(&big(N), &BigUint::one(), &big(23), None).unwrap();
        let lambda = lb.smallest_sufficient();
        let config = FermatConfig {
            b: big(23),
            ..FermatConfig::default()
        };
        let outcome = factor_with_lambda(&big(N), &lambda, &config).unwrap();
        let report = outcome.report().expect("factor expected");
        assert_eq!(&report.divisor * &report.cofactor, big(N));
    }
}
