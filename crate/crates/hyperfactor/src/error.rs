use num_bigint::BigUint;
use thiserror::Error;

/// Errors shared across the toolkit.
///
/// `CommonFactor` is special: several operations discover a nontrivial factor
/// of the input while validating coprimality preconditions. Factorization
/// drivers treat that case as success rather than failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus} (gcd {gcd})")]
    NotInvertible {
        value: BigUint,
        modulus: BigUint,
        gcd: BigUint,
    },

    #[error("modulus shares common factor {0} with the input")]
    CommonFactor(BigUint),

    #[error("{what}: {requested} exceeds budget {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("{0} is not an odd prime at least 3")]
    NotOddPrime(u64),

    #[error("moduli are not pairwise coprime (common factor {0})")]
    NotCoprime(BigUint),

    #[error("residue class for modulus {0} is empty")]
    EmptyClass(u64),

    #[error("residue {residue} is not reduced modulo {modulus}")]
    NotReduced { residue: u64, modulus: u64 },

    #[error("input must be odd, got {0}")]
    EvenInput(BigUint),

    #[error("no proper factor found: {0} is likely prime")]
    LikelyPrime(BigUint),

    #[error("{element} is not in the sieve set modulo {modulus}")]
    NotInSieveSet { element: u64, modulus: u64 },

    #[error("{0} does not divide {1}")]
    NotADivisor(BigUint, BigUint),

    #[error("divisor list of {0} is unavailable (prime or too large to factor)")]
    DivisorsUnavailable(BigUint),

    #[error("malformed instance document: {0}")]
    Document(String),

    #[error("malformed selection: {0}")]
    Selection(String),

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
