//! Streaming enumeration of a CRT-combined residue set.
//!
//! Given residue classes `A_i` modulo pairwise coprime `m_i`, the enumerator
//! walks the full combined set in `Z_M` (`M = prod m_i`) like an odometer:
//! precompute, per class, the Gaussian basis element `M_i = (M/m_i) * c_i`
//! with `c_i = (M/m_i)^{-1} mod m_i` and the wrap-around deltas between
//! consecutive residues; each step then adds a handful of precomputed deltas
//! to the previous element. Memory stays at `O(sum |A_i|)` values no matter
//! how large the combined set is, and a full drain costs an amortized
//! constant number of modular additions per element.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::num::inv_u64;

/// One residue class `A ⊆ Z_m` fed into the enumerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtClass {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl CrtClass {
    pub fn new(modulus: u64, residues: impl Into<Vec<u64>>) -> Self {
        CrtClass {
            modulus,
            residues: residues.into(),
        }
    }
}

/// Stateful streaming iterator over the CRT combination of residue classes.
///
/// Emission follows odometer order: the class with the most residues cycles
/// fastest, and a counter wrapping to zero carries into the next class. The
/// emitted multiset equals the combined set exactly, with no duplicates; the
/// order is a documented contract, not sorted order.
#[derive(Debug, Clone)]
pub struct CrtEnumerator {
    product: BigUint,
    /// Per class: `deltas[i][0]` is the wrap delta, `deltas[i][l]` the step
    /// from residue `l-1` to residue `l`.
    deltas: Vec<Vec<BigUint>>,
    sizes: Vec<usize>,
    counters: Vec<usize>,
    current: BigUint,
    started: bool,
    finished: bool,
    total: BigUint,
    emitted: BigUint,
    additions: u64,
}

impl CrtEnumerator {
    /// Precompute deltas and position the enumerator at its first element.
    ///
    /// Classes are sorted internally by descending residue count, which
    /// minimizes odometer carries. Fails on non-coprime moduli (reporting the
    /// offending gcd), on an empty class, and on residues not reduced modulo
    /// their class modulus.
    pub fn prepare(classes: Vec<CrtClass>) -> Result<Self> {
        let mut classes = classes;
        for class in &mut classes {
            if class.modulus == 0 {
                return Err(Error::InvalidInput("class modulus must be nonzero".into()));
            }
            if class.residues.is_empty() {
                return Err(Error::EmptyClass(class.modulus));
            }
            for &r in &class.residues {
                if r >= class.modulus {
                    return Err(Error::NotReduced {
                        residue: r,
                        modulus: class.modulus,
                    });
                }
            }
            class.residues.sort_unstable();
            class.residues.dedup();
        }
        // Largest class first; modulus as tie-break keeps ordering deterministic.
        classes.sort_by(|a, b| {
            b.residues
                .len()
                .cmp(&a.residues.len())
                .then(a.modulus.cmp(&b.modulus))
        });

        let mut product = BigUint::one();
        for class in &classes {
            let g = product.gcd(&BigUint::from(class.modulus));
            if !g.is_one() {
                return Err(Error::NotCoprime(g));
            }
            product *= class.modulus;
        }

        let mut deltas = Vec::with_capacity(classes.len());
        let mut sizes = Vec::with_capacity(classes.len());
        let mut total = BigUint::one();
        let mut current = BigUint::zero();
        for class in &classes {
            let m_i = class.modulus;
            let quotient = &product / m_i;
            let c_i = inv_u64((&quotient % m_i).try_into().unwrap(), m_i)
                .expect("moduli verified pairwise coprime");
            // basis = (M/m_i) * c_i ≡ 1 (mod m_i), ≡ 0 (mod m_j)
            let basis = (quotient * c_i) % &product;

            let k = class.residues.len();
            let mut class_deltas = Vec::with_capacity(k);
            let wrap = (class.residues[0] + m_i - class.residues[k - 1]) % m_i;
            class_deltas.push(&basis * wrap % &product);
            for l in 1..k {
                let diff = (class.residues[l] + m_i - class.residues[l - 1]) % m_i;
                class_deltas.push(&basis * diff % &product);
            }
            current += &basis * class.residues[0];
            deltas.push(class_deltas);
            sizes.push(k);
            total *= k;
        }
        current %= &product;

        Ok(CrtEnumerator {
            counters: vec![0; sizes.len()],
            // Building the first element costs one addition per class beyond
            // the first; fold that into the counter.
            additions: sizes.len().saturating_sub(1) as u64,
            product,
            deltas,
            sizes,
            current,
            started: false,
            finished: false,
            total,
            emitted: BigUint::zero(),
        })
    }

    /// Split into up to `n` independent sub-enumerators by partitioning the
    /// largest class. Each shard streams a disjoint slice of the combined
    /// set; together they cover it exactly.
    pub fn prepare_sharded(classes: Vec<CrtClass>, n: usize) -> Result<Vec<Self>> {
        if n <= 1 {
            return Ok(vec![Self::prepare(classes)?]);
        }
        let mut classes = classes;
        let Some(largest) = classes
            .iter()
            .enumerate()
            .max_by_key(|(_, c)| c.residues.len())
            .map(|(i, _)| i)
        else {
            return Ok(vec![Self::prepare(classes)?]);
        };
        let split = classes.swap_remove(largest);
        let chunk = split.residues.len().div_ceil(n);
        let mut shards = Vec::new();
        for piece in split.residues.chunks(chunk.max(1)) {
            let mut shard_classes = classes.clone();
            shard_classes.push(CrtClass::new(split.modulus, piece.to_vec()));
            shards.push(Self::prepare(shard_classes)?);
        }
        Ok(shards)
    }

    /// Advance to the next element and borrow it, or `None` once the set is
    /// exhausted. The borrow avoids a clone in hot loops.
    pub fn advance(&mut self) -> Option<&BigUint> {
        if self.finished {
            return None;
        }
        if !self.started {
            self.started = true;
            // Degenerate instance with no classes: the combined set is {0}.
            self.emitted += 1u32;
            return Some(&self.current);
        }
        let mut carry_depth = None;
        for i in 0..self.sizes.len() {
            self.counters[i] += 1;
            if self.counters[i] == self.sizes[i] {
                self.counters[i] = 0;
                continue;
            }
            carry_depth = Some(i);
            break;
        }
        let Some(depth) = carry_depth else {
            self.finished = true;
            return None;
        };
        for i in 0..=depth {
            self.current += &self.deltas[i][self.counters[i]];
            if self.current >= self.product {
                self.current -= &self.product;
            }
            self.additions += 1;
        }
        self.emitted += 1u32;
        Some(&self.current)
    }

    /// `prod m_i`.
    pub fn combined_modulus(&self) -> &BigUint {
        &self.product
    }

    /// Number of elements the full drain will emit (`prod |A_i|`).
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Elements emitted so far.
    pub fn emitted(&self) -> &BigUint {
        &self.emitted
    }

    /// Modular additions performed so far (first-element assembly plus one
    /// per delta applied in the main loop).
    pub fn additions(&self) -> u64 {
        self.additions
    }

    /// Number of precomputed big-integer values held: one delta per residue.
    /// This is the whole live state, regardless of how many elements the
    /// drain will emit.
    pub fn stored_deltas(&self) -> usize {
        self.deltas.iter().map(Vec::len).sum()
    }
}

impl Iterator for CrtEnumerator {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        self.advance().cloned()
    }
}
