//! Factorization as multiple-choice subset-sum.
//!
//! The CRT decomposition writes every element of the shifted sieve set
//! modulo `M = rho_1 ... rho_k` as a sum of per-factor contributions, one
//! summand chosen per prime power. Finding the divisor-sum offset therefore
//! becomes a multiple-choice subset-sum instance: pick exactly one weight
//! from each class so the total stays under a capacity (maximization form)
//! or hits an exact target modulo a sub-modulus (exact form). The builders
//! emit those instances from known moduli; a desk-scale solver and a JSON
//! codec make the claims measurable.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{ceil_sqrt, mod_inverse};
use crate::sieve::{build_sieve_set, FactoredModulus};
use crate::Budgets;

/// Objective of an instance: maximize under a capacity, or hit a target
/// residue exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McssMode {
    Max { capacity: BigUint },
    Exact { target: BigUint },
}

/// One weight class; exactly one weight must be chosen from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McssClass {
    /// Source factor the weights were lifted from (`1` for the unfolding
    /// class of the maximization form, `U` for the offset class of the exact
    /// form).
    pub rho: BigUint,
    /// Weight `j` of a sieve-derived class corresponds to the `j`-th smallest
    /// residue of the shifted per-factor sieve set.
    pub weights: Vec<BigUint>,
}

/// A multiple-choice subset-sum instance produced by one of the reductions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McssInstance {
    pub mode: McssMode,
    pub n: BigUint,
    /// `M` for the maximization form; `V` for the exact form.
    pub modulus: BigUint,
    pub classes: Vec<McssClass>,
}

/// Chosen weight index per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub choices: Vec<usize>,
}

/// Result of checking a selection against an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub satisfied: bool,
    /// Plain sum of the chosen weights.
    pub total: BigUint,
    /// The sum reduced by the instance modulus.
    pub residue: BigUint,
}

impl McssInstance {
    /// Product of class sizes.
    pub fn selection_count(&self) -> BigUint {
        self.classes
            .iter()
            .fold(BigUint::one(), |acc, c| acc * c.weights.len())
    }
}

/// CRT basis element of `rho` inside `m`: the representative of
/// `(m/rho) * ((m/rho)^{-1} mod rho)` in `[0, m)`; it is `1 mod rho` and
/// `0` modulo every other factor.
fn crt_basis(m: &BigUint, rho: u64) -> Result<BigUint> {
    let quotient = m / rho;
    let inv = mod_inverse(&(&quotient % rho), &BigUint::from(rho))?;
    Ok(quotient * inv)
}

/// Shifted per-factor residue lists `L̄_rho`, ascending, with
/// `L = ceil(2 sqrt(k_sum * N))`.
fn shifted_factor_lists(
    n: &BigUint,
    modulus: &FactoredModulus,
    k_sum: &BigUint,
    budgets: &Budgets,
) -> Result<(BigUint, Vec<Vec<u64>>)> {
    let l = ceil_sqrt(&(BigUint::from(4u32) * k_sum * n));
    let set = build_sieve_set(n, modulus.clone(), k_sum, &l, budgets.per_factor)?;
    Ok((l, set.per_factor().to_vec()))
}

/// Maximization reduction: one class per factor of `M` holding
/// `{a * M_i mod M : a in L̄_rho_i}`, plus the unfolding class
/// `{0, M, ..., (k-1)M}`, under capacity `(k-1)M + bound`.
///
/// The divisor-sum offset of any factorization of `N` induces a feasible
/// selection whenever it stays below `bound`.
pub fn build_max_instance(
    n: &BigUint,
    modulus: &FactoredModulus,
    k_sum: &BigUint,
    bound: &BigUint,
    budgets: &Budgets,
) -> Result<McssInstance> {
    if modulus.omega() == 0 {
        return Err(Error::InvalidInput("modulus must have at least one factor".into()));
    }
    let m = modulus.value();
    let (_, lists) = shifted_factor_lists(n, modulus, k_sum, budgets)?;
    let k = modulus.omega();

    let mut classes = Vec::with_capacity(k + 1);
    classes.push(McssClass {
        rho: BigUint::one(),
        weights: (0..k).map(|j| m * j).collect(),
    });
    for (factor, residues) in modulus.factors().iter().zip(&lists) {
        let basis = crt_basis(m, factor.value())?;
        classes.push(McssClass {
            rho: BigUint::from(factor.value()),
            weights: residues.iter().map(|&a| a * &basis % m).collect(),
        });
    }
    let capacity = m * (k - 1) + bound;
    Ok(McssInstance {
        mode: McssMode::Max { capacity },
        n: n.clone(),
        modulus: m.clone(),
        classes,
    })
}

/// Exact-target reduction over `M = U * V`: weights live modulo `V`, the
/// offset class absorbs the integer unfolding over `U`, and the
/// factorization-induced selection sums to `0 (mod V)`.
///
/// Both sub-moduli should exceed `sqrt(N)` for the solution set to collapse
/// towards the divisor offset; [`size_guidance_met`] reports whether they
/// do (guidance, not an error).
pub fn build_exact_instance(
    n: &BigUint,
    u: &FactoredModulus,
    v: &FactoredModulus,
    budgets: &Budgets,
) -> Result<McssInstance> {
    if u.omega() == 0 || v.omega() == 0 {
        return Err(Error::InvalidInput("both sub-moduli need at least one factor".into()));
    }
    let g = u.value().gcd(v.value());
    if !g.is_one() {
        return Err(Error::NotCoprime(g));
    }
    let one = BigUint::one();
    let (u_val, v_val) = (u.value(), v.value());
    let (_, u_lists) = shifted_factor_lists(n, u, &one, budgets)?;
    let (_, v_lists) = shifted_factor_lists(n, v, &one, budgets)?;
    let k = u.omega();

    let mut classes = Vec::with_capacity(k + v.omega() + 1);
    // Offset class: -j*U (mod V) for j = 0..=k.
    classes.push(McssClass {
        rho: u_val.clone(),
        weights: (0..=k)
            .map(|j| {
                let t = (u_val * j) % v_val;
                (v_val - t) % v_val
            })
            .collect(),
    });
    for (factor, residues) in u.factors().iter().zip(&u_lists) {
        let basis = crt_basis(u_val, factor.value())?;
        classes.push(McssClass {
            rho: BigUint::from(factor.value()),
            weights: residues
                .iter()
                .map(|&a| (a * &basis % u_val) % v_val)
                .collect(),
        });
    }
    for (factor, residues) in v.factors().iter().zip(&v_lists) {
        let basis = crt_basis(v_val, factor.value())?;
        classes.push(McssClass {
            rho: BigUint::from(factor.value()),
            weights: residues
                .iter()
                .map(|&b| {
                    let t = b * &basis % v_val;
                    (v_val - t) % v_val
                })
                .collect(),
        });
    }
    Ok(McssInstance {
        mode: McssMode::Exact {
            target: BigUint::zero(),
        },
        n: n.clone(),
        modulus: v_val.clone(),
        classes,
    })
}

/// Whether both sub-moduli exceed `ceil(sqrt(N))`.
pub fn size_guidance_met(n: &BigUint, u: &FactoredModulus, v: &FactoredModulus) -> bool {
    let root = ceil_sqrt(n);
    u.value() > &root && v.value() > &root
}

/// Check a selection: feasibility under the capacity (max mode) or the
/// target congruence (exact mode), returning the sums for inspection.
pub fn verify_selection(instance: &McssInstance, selection: &Selection) -> Result<Verdict> {
    if selection.choices.len() != instance.classes.len() {
        return Err(Error::Selection(format!(
            "selection has {} choices for {} classes",
            selection.choices.len(),
            instance.classes.len()
        )));
    }
    let mut total = BigUint::zero();
    for (class, &choice) in instance.classes.iter().zip(&selection.choices) {
        let weight = class.weights.get(choice).ok_or_else(|| {
            Error::Selection(format!(
                "choice {choice} out of range for class of {} weights",
                class.weights.len()
            ))
        })?;
        total += weight;
    }
    let residue = &total % &instance.modulus;
    let satisfied = match &instance.mode {
        McssMode::Max { capacity } => total <= *capacity,
        McssMode::Exact { target } => residue == target % &instance.modulus,
    };
    Ok(Verdict {
        satisfied,
        total,
        residue,
    })
}

/// Enumerate every satisfying selection (exact mode) or every optimal
/// feasible selection (max mode).
///
/// Exact instances with a modulus inside the DP budget run a reachable-
/// residue dynamic program with full backtracking; otherwise, and for the
/// maximization form, a bounded exhaustive search runs when the selection
/// space fits its budget.
pub fn solve_small(instance: &McssInstance, budgets: &Budgets) -> Result<Vec<Selection>> {
    match &instance.mode {
        McssMode::Exact { target } => {
            if let Some(v) = instance.modulus.to_u64().filter(|&v| v <= budgets.solve_modulus) {
                solve_exact_dp(instance, target, v, budgets)
            } else {
                let count = instance.selection_count();
                if count > BigUint::from(budgets.solve_selections) {
                    return Err(Error::BudgetExceeded {
                        what: "exhaustive subset-sum search",
                        requested: count.to_u64().unwrap_or(u64::MAX),
                        limit: budgets.solve_selections,
                    });
                }
                solve_exact_exhaustive(instance, target)
            }
        }
        McssMode::Max { capacity } => {
            let count = instance.selection_count();
            if count > BigUint::from(budgets.solve_selections) {
                return Err(Error::BudgetExceeded {
                    what: "branch-and-bound subset-sum search",
                    requested: count.to_u64().unwrap_or(u64::MAX),
                    limit: budgets.solve_selections,
                });
            }
            solve_max(instance, capacity)
        }
    }
}

/// Fixed-width bitset over `v` residues.
struct ResidueSet {
    words: Vec<u64>,
    v: u64,
}

impl ResidueSet {
    fn new(v: u64) -> Self {
        ResidueSet {
            words: vec![0; v.div_ceil(64) as usize],
            v,
        }
    }

    fn insert(&mut self, r: u64) {
        self.words[(r / 64) as usize] |= 1 << (r % 64);
    }

    fn contains(&self, r: u64) -> bool {
        self.words[(r / 64) as usize] >> (r % 64) & 1 != 0
    }

    /// `self |= other rotated left by shift (mod v)`, word at a time.
    fn or_rotated(&mut self, other: &ResidueSet, shift: u64) {
        let v = self.v as usize;
        let shift = (shift % self.v) as usize;
        // bits [0, v-shift) land at [shift, v); bits [v-shift, v) wrap to [0, shift)
        or_bit_range(&mut self.words, &other.words, 0, v - shift, shift);
        if shift > 0 {
            or_bit_range(&mut self.words, &other.words, v - shift, v, 0);
        }
    }
}

/// OR source bits `[src_lo, src_hi)` into `dst` starting at bit `dst_lo`.
fn or_bit_range(dst: &mut [u64], src: &[u64], src_lo: usize, src_hi: usize, dst_lo: usize) {
    let mut s = src_lo;
    let mut d = dst_lo;
    while s < src_hi {
        let take = 64.min(src_hi - s);
        let (w, b) = (s / 64, s % 64);
        let mut chunk = src[w] >> b;
        if b != 0 && w + 1 < src.len() {
            chunk |= src[w + 1] << (64 - b);
        }
        if take < 64 {
            chunk &= (1u64 << take) - 1;
        }
        let (w, b) = (d / 64, d % 64);
        dst[w] |= chunk << b;
        if b != 0 && b + take > 64 {
            dst[w + 1] |= chunk >> (64 - b);
        }
        s += take;
        d += take;
    }
}

fn solve_exact_dp(
    instance: &McssInstance,
    target: &BigUint,
    v: u64,
    budgets: &Budgets,
) -> Result<Vec<Selection>> {
    let classes: Vec<Vec<u64>> = instance
        .classes
        .iter()
        .map(|c| {
            c.weights
                .iter()
                .map(|w| (w % v).to_u64().unwrap())
                .collect()
        })
        .collect();
    // reach[i]: residues reachable with the first i classes
    let mut reach: Vec<ResidueSet> = Vec::with_capacity(classes.len() + 1);
    let mut first = ResidueSet::new(v);
    first.insert(0);
    reach.push(first);
    for class in &classes {
        let mut next = ResidueSet::new(v);
        for &w in class {
            next.or_rotated(reach.last().unwrap(), w % v);
        }
        reach.push(next);
    }

    let target = (target % v).to_u64().unwrap();
    if !reach[classes.len()].contains(target) {
        return Ok(Vec::new());
    }
    let mut solutions = Vec::new();
    let mut stack = vec![0usize; classes.len()];
    backtrack_exact(
        &classes,
        &reach,
        classes.len(),
        target,
        v,
        &mut stack,
        &mut solutions,
        budgets.solve_selections,
    )?;
    solutions.reverse();
    Ok(solutions)
}

#[allow(clippy::too_many_arguments)]
fn backtrack_exact(
    classes: &[Vec<u64>],
    reach: &[ResidueSet],
    depth: usize,
    target: u64,
    v: u64,
    stack: &mut Vec<usize>,
    out: &mut Vec<Selection>,
    limit: u64,
) -> Result<()> {
    if depth == 0 {
        if target == 0 {
            if out.len() as u64 >= limit {
                return Err(Error::BudgetExceeded {
                    what: "subset-sum solution count",
                    requested: limit + 1,
                    limit,
                });
            }
            out.push(Selection {
                choices: stack.clone(),
            });
        }
        return Ok(());
    }
    for (j, &w) in classes[depth - 1].iter().enumerate() {
        let prev = (target + v - w % v) % v;
        if reach[depth - 1].contains(prev) {
            stack[depth - 1] = j;
            backtrack_exact(classes, reach, depth - 1, prev, v, stack, out, limit)?;
        }
    }
    Ok(())
}

fn solve_exact_exhaustive(instance: &McssInstance, target: &BigUint) -> Result<Vec<Selection>> {
    let modulus = &instance.modulus;
    let target = target % modulus;
    let mut out = Vec::new();
    let mut choices = vec![0usize; instance.classes.len()];
    exhaustive_walk(instance, 0, &BigUint::zero(), &mut choices, &mut |sum, choices| {
        if sum % modulus == target {
            out.push(Selection {
                choices: choices.to_vec(),
            });
        }
    });
    Ok(out)
}

fn solve_max(instance: &McssInstance, capacity: &BigUint) -> Result<Vec<Selection>> {
    let mut best: Option<BigUint> = None;
    let mut out: Vec<Selection> = Vec::new();
    let mut choices = vec![0usize; instance.classes.len()];
    exhaustive_walk(instance, 0, &BigUint::zero(), &mut choices, &mut |sum, choices| {
        if sum > capacity {
            return;
        }
        match &best {
            Some(b) if sum < b => {}
            Some(b) if sum == b => out.push(Selection {
                choices: choices.to_vec(),
            }),
            _ => {
                best = Some(sum.clone());
                out.clear();
                out.push(Selection {
                    choices: choices.to_vec(),
                });
            }
        }
    });
    Ok(out)
}

fn exhaustive_walk(
    instance: &McssInstance,
    depth: usize,
    sum: &BigUint,
    choices: &mut Vec<usize>,
    visit: &mut impl FnMut(&BigUint, &[usize]),
) {
    if depth == instance.classes.len() {
        visit(sum, choices);
        return;
    }
    for (j, w) in instance.classes[depth].weights.iter().enumerate() {
        choices[depth] = j;
        let next = sum + w;
        exhaustive_walk(instance, depth + 1, &next, choices, visit);
    }
}

/// Rebuild the divisor-sum offset from a solved exact instance: CRT-combine
/// the chosen residues of the `U`-factor classes back into `s̄ mod U`.
pub fn reconstruct_offset(
    instance: &McssInstance,
    selection: &Selection,
    budgets: &Budgets,
) -> Result<BigUint> {
    let McssMode::Exact { .. } = instance.mode else {
        return Err(Error::InvalidInput(
            "offset reconstruction applies to exact instances".into(),
        ));
    };
    if selection.choices.len() != instance.classes.len() {
        return Err(Error::Selection("selection length mismatch".into()));
    }
    let u_val = &instance.classes[0].rho;
    let mut offset = BigUint::zero();
    for (class, &choice) in instance.classes.iter().zip(&selection.choices).skip(1) {
        if !(u_val % &class.rho).is_zero() {
            continue; // V-factor class
        }
        let rho = class.rho.to_u64().ok_or_else(|| {
            Error::InvalidInput("factor does not fit 64 bits".into())
        })?;
        let factored = FactoredModulus::factor_value(&class.rho, budgets.per_factor)?;
        let (_, lists) = shifted_factor_lists(&instance.n, &factored, &BigUint::one(), budgets)?;
        let residue = *lists[0].get(choice).ok_or_else(|| {
            Error::Selection(format!("choice {choice} out of range for factor {rho}"))
        })?;
        offset += residue * crt_basis(u_val, rho)?;
    }
    Ok(offset % u_val)
}

#[derive(Serialize, Deserialize)]
struct Doc {
    version: u32,
    mode: String,
    n: String,
    modulus: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    capacity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<String>,
    classes: Vec<DocClass>,
}

#[derive(Serialize, Deserialize)]
struct DocClass {
    rho: String,
    weights: Vec<String>,
}

/// Serialize an instance to the interchange document: JSON with every
/// integer as a decimal string, no floating point anywhere.
pub fn to_json(instance: &McssInstance) -> String {
    let doc = Doc {
        version: 1,
        mode: match instance.mode {
            McssMode::Max { .. } => "max".into(),
            McssMode::Exact { .. } => "exact".into(),
        },
        n: instance.n.to_string(),
        modulus: instance.modulus.to_string(),
        capacity: match &instance.mode {
            McssMode::Max { capacity } => Some(capacity.to_string()),
            McssMode::Exact { .. } => None,
        },
        target: match &instance.mode {
            McssMode::Exact { target } => Some(target.to_string()),
            McssMode::Max { .. } => None,
        },
        classes: instance
            .classes
            .iter()
            .map(|c| DocClass {
                rho: c.rho.to_string(),
                weights: c.weights.iter().map(|w| w.to_string()).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
}

fn parse_decimal(field: &str, s: &str) -> Result<BigUint> {
    BigUint::parse_bytes(s.as_bytes(), 10)
        .ok_or_else(|| Error::Document(format!("field '{field}': '{s}' is not a decimal integer")))
}

/// Parse and validate an instance document. Syntax errors carry the line and
/// column from the JSON parser; semantic errors name the offending field.
/// The divisibility invariant is enforced: every class whose source factor
/// divides the modulus must hold weights divisible by `modulus / rho`.
pub fn from_json(text: &str) -> Result<McssInstance> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    if doc.version != 1 {
        return Err(Error::Document(format!(
            "unsupported version {}",
            doc.version
        )));
    }
    let n = parse_decimal("n", &doc.n)?;
    let modulus = parse_decimal("modulus", &doc.modulus)?;
    if modulus.is_zero() {
        return Err(Error::Document("modulus must be nonzero".into()));
    }
    let mode = match doc.mode.as_str() {
        "max" => {
            let cap = doc
                .capacity
                .as_deref()
                .ok_or_else(|| Error::Document("max mode requires 'capacity'".into()))?;
            McssMode::Max {
                capacity: parse_decimal("capacity", cap)?,
            }
        }
        "exact" => {
            let target = doc
                .target
                .as_deref()
                .ok_or_else(|| Error::Document("exact mode requires 'target'".into()))?;
            McssMode::Exact {
                target: parse_decimal("target", target)?,
            }
        }
        other => {
            return Err(Error::Document(format!(
                "mode must be 'max' or 'exact', got '{other}'"
            )))
        }
    };
    let mut classes = Vec::with_capacity(doc.classes.len());
    for (i, class) in doc.classes.iter().enumerate() {
        let rho = parse_decimal(&format!("classes[{i}].rho"), &class.rho)?;
        if rho.is_zero() {
            return Err(Error::Document(format!("classes[{i}].rho must be nonzero")));
        }
        if class.weights.is_empty() {
            return Err(Error::Document(format!("classes[{i}] has no weights")));
        }
        let mut weights = Vec::with_capacity(class.weights.len());
        let enforce = (&modulus % &rho).is_zero();
        let share = if enforce { &modulus / &rho } else { BigUint::one() };
        for (j, w) in class.weights.iter().enumerate() {
            let w = parse_decimal(&format!("classes[{i}].weights[{j}]"), w)?;
            if enforce && !(&w % &share).is_zero() {
                return Err(Error::Document(format!(
                    "classes[{i}].weights[{j}]: {w} is not divisible by modulus/rho = {share}"
                )));
            }
            weights.push(w);
        }
        classes.push(McssClass { rho, weights });
    }
    if classes.is_empty() {
        return Err(Error::Document("instance has no classes".into()));
    }
    Ok(McssInstance {
        mode,
        n,
        modulus,
        classes,
    })
}
