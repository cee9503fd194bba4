//! Hyperbolic-sieve factorization toolkit.
//!
//! The library builds modular hyperbolas and their sieve sets, streams
//! CRT-combined residue sets in constant memory, and applies both to two
//! Fermat-style special-purpose factorization algorithms for integers with a
//! small divisor difference. It also materializes the reduction from
//! factorization to multiple-choice subset-sum instances.
//!
//! Modules:
//! - [`num`]: exact big-integer primitives (square roots, perfect-square
//!   detection, modular inverses, Jacobi/Legendre symbols, prime sieve).
//! - [`sieve`]: hyperbolas, sieve sets and their closed-form cardinalities.
//! - [`crt`]: the streaming odometer over CRT-combined residue classes.
//! - [`fermat`]: the negligible-space sieve-improved Fermat scan and the
//!   fully automatic driver.
//! - [`tradeoff`]: the meet-in-the-middle time-space tradeoff over a split
//!   modulus.
//! - [`mcss`]: multiple-choice subset-sum reductions, a desk-scale solver
//!   and the JSON instance format.

pub mod crt;
pub mod error;
pub mod fermat;
pub mod mcss;
pub mod num;
pub mod sieve;
pub mod tradeoff;

pub use crt::{CrtClass, CrtEnumerator};
pub use error::{Error, Result};
pub use fermat::{FactorReport, FermatConfig, FermatOutcome, FermatParams, LambdaBound};
pub use mcss::{McssInstance, McssMode, Selection};
pub use sieve::{FactoredModulus, NuProfile, PrimePower, SieveSet};
pub use tradeoff::{MeetLists, SplitModulus};

/// Enumeration and memory ceilings. Every budget errs rather than silently
/// thrashing; the CLI maps `HYPERFACTOR_*` environment variables onto these
/// fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Whole-modulus brute-force enumeration ceiling.
    pub enumeration: u64,
    /// Per-factor prime-power enumeration ceiling.
    pub per_factor: u64,
    /// Combined element count allowed for meet-in-the-middle lists.
    pub meet_elements: u64,
    /// Selection count ceiling for the exhaustive subset-sum solver.
    pub solve_selections: u64,
    /// Modulus ceiling for the dynamic-programming subset-sum solver.
    pub solve_modulus: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: sieve::DEFAULT_ENUM_BUDGET,
            per_factor: sieve::DEFAULT_FACTOR_BUDGET,
            meet_elements: 1 << 27,
            solve_selections: 100_000_000,
            solve_modulus: 10_000_000,
        }
    }
}
