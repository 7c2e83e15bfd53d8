//! Exhaustive validity checks, tight sets, structure classification, exact
//! affine rank and facet certification.

mod rank;
mod separate;
mod structure;

use std::collections::BTreeMap;

pub use rank::{affine_rank, linear_rank};
pub use separate::{separate, Violation};
pub use structure::{classify_structure, structure_count, StructureId};

use crate::enumerate::weak_orders;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::inequalities::{ClassTag, Inequality, Sense};
use crate::order::{pair_count, pair_index, WeakOrder};

/// Default ceiling on `n` for exhaustive verification.
pub const VERIFY_GUARD: usize = 7;

/// Settings for scans over every weak order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exhaustive {
    pub guard: usize,
    pub execution: Execution,
}

impl Default for Exhaustive {
    fn default() -> Self {
        Exhaustive {
            guard: VERIFY_GUARD,
            execution: Execution::default(),
        }
    }
}

impl Exhaustive {
    pub fn with_guard(guard: usize) -> Self {
        Exhaustive {
            guard,
            ..Self::default()
        }
    }

    pub fn sequential(self) -> Self {
        Exhaustive {
            execution: Execution::Sequential,
            ..self
        }
    }
}

/// `π · x` as a sum of masked popcounts, one mask per distinct coefficient.
#[derive(Clone, Debug)]
pub(crate) struct Lhs {
    n: usize,
    terms: Vec<(i64, u128)>,
}

impl Lhs {
    pub fn new(n: usize, coeffs: &BTreeMap<(usize, usize), i64>) -> Result<Self> {
        let mut by_value: BTreeMap<i64, u128> = BTreeMap::new();
        for (&(i, j), &c) in coeffs {
            if c != 0 {
                *by_value.entry(c).or_insert(0) |= 1u128 << pair_index(i, j, n)?;
            }
        }
        Ok(Lhs {
            n,
            terms: by_value.into_iter().collect(),
        })
    }

    #[inline]
    pub fn eval(&self, w: &WeakOrder) -> i64 {
        let bits = w.bits();
        self.terms
            .iter()
            .map(|&(c, m)| c * (bits & m).count_ones() as i64)
            .sum()
    }

    /// Largest value over all weak orders, with the indices attaining it.
    pub fn maximize(&self, mode: &Exhaustive) -> Result<(i64, Vec<WeakOrder>)> {
        let all = weak_orders(self.n, mode.guard)?;
        let best = exec::max_of(mode.execution, &all, |w| self.eval(w)).expect("nonempty");
        let hits = exec::positions(mode.execution, &all, |w| self.eval(w) == best);
        Ok((best, hits.into_iter().map(|k| all[k]).collect()))
    }
}

/// Exact `π · x` at the characteristic vector of `w`.
pub fn evaluate(q: &Inequality, w: &WeakOrder) -> Result<i64> {
    q.lhs(w)
}

/// Outcome of an exhaustive validity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    /// Worst left-hand side: the maximum for `<=`, the minimum for `>=`.
    pub extreme_lhs: i64,
    pub valid: bool,
    /// Weak orders attaining the extreme value, in canonical order.
    pub argmax: Vec<WeakOrder>,
}

fn oriented(q: &Inequality) -> Result<Lhs> {
    let coeffs = match q.sense() {
        Sense::Le => q.coeffs().clone(),
        Sense::Ge => q.coeffs().iter().map(|(&k, &c)| (k, -c)).collect(),
    };
    Lhs::new(q.n(), &coeffs)
}

fn sign(q: &Inequality) -> i64 {
    match q.sense() {
        Sense::Le => 1,
        Sense::Ge => -1,
    }
}

/// Maximizes (or for `>=` rows minimizes) the left-hand side over every weak
/// order on `[n]`.
pub fn check_validity(q: &Inequality, mode: &Exhaustive) -> Result<Validity> {
    let (best, argmax) = oriented(q)?.maximize(mode)?;
    let s = sign(q);
    Ok(Validity {
        extreme_lhs: s * best,
        valid: best <= s * q.rhs(),
        argmax,
    })
}

/// Weak orders meeting `q` at equality, in canonical order.
pub fn tight_set(q: &Inequality, mode: &Exhaustive) -> Result<Vec<WeakOrder>> {
    let lhs = oriented(q)?;
    let target = sign(q) * q.rhs();
    let all = weak_orders(q.n(), mode.guard)?;
    let hits = exec::positions(mode.execution, &all, |w| lhs.eval(w) == target);
    Ok(hits.into_iter().map(|k| all[k]).collect())
}

/// Affine rank of a set of weak orders.
pub fn order_affine_rank(orders: &[WeakOrder], exec: Execution) -> Result<usize> {
    let points: Vec<Vec<u8>> = orders.iter().map(WeakOrder::to_vector).collect();
    affine_rank(&points, exec)
}

/// Tight points per structure, plus those matching none.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub counts: BTreeMap<String, usize>,
    pub unclassified: usize,
}

/// Everything the exhaustive check learns about one inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetReport {
    pub class: ClassTag,
    pub n: usize,
    pub fixed: Vec<usize>,
    pub valid: bool,
    /// Worst left-hand side over all weak orders.
    pub max_lhs: i64,
    pub rhs: i64,
    pub tight_count: usize,
    pub affine_rank: usize,
    pub is_facet: bool,
    /// Present for the T classes with a structure table.
    pub census: Option<Census>,
    /// Size of the enumeration scanned.
    pub enumerated: usize,
}

/// Census of `orders` against the structure table of `class`.
pub fn structure_census(class: ClassTag, fixed: &[usize], orders: &[WeakOrder]) -> Census {
    let mut census = Census::default();
    for w in orders {
        match classify_structure(class, fixed, w) {
            Some(id) => *census.counts.entry(id.label()).or_insert(0) += 1,
            None => census.unclassified += 1,
        }
    }
    census
}

fn structure_target(q: &Inequality) -> Option<(ClassTag, Vec<usize>)> {
    (structure_count(q.class()) > 0).then(|| (q.class(), q.fixed().to_vec()))
}

/// Validity, tight set, structure census and affine rank of `q`.
pub fn facet_report(q: &Inequality, mode: &Exhaustive) -> Result<FacetReport> {
    let n = q.n();
    if n < 2 {
        return Err(Error::Dimension(format!("n = {n} too small")));
    }
    let validity = check_validity(q, mode)?;
    let tight = tight_set(q, mode)?;
    let rank = if tight.is_empty() {
        0
    } else {
        order_affine_rank(&tight, mode.execution)?
    };
    let census = structure_target(q).map(|(class, fixed)| structure_census(class, &fixed, &tight));
    Ok(FacetReport {
        class: q.class(),
        n,
        fixed: q.fixed().to_vec(),
        valid: validity.valid,
        max_lhs: validity.extreme_lhs,
        rhs: q.rhs(),
        tight_count: tight.len(),
        affine_rank: rank,
        is_facet: validity.valid && rank == pair_count(n),
        census,
        enumerated: weak_orders(n, mode.guard)?.len(),
    })
}
