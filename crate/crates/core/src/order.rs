//! Weak orders in their three representations: the characteristic vector over
//! ordered pairs, the ranking vector and the preference partition (ordered list
//! of tie buckets). Alternatives are 1-based throughout the public API.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest `n` whose characteristic vector fits the packed representation.
pub const MAX_N: usize = 11;

/// Number of ordered pairs `(i, j)`, `i != j`, on `n` alternatives.
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1)
}

/// Canonical coordinate of the ordered pair `(i, j)`: row-major over `i`
/// with the diagonal slot skipped.
pub fn pair_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidPair { i, j, n });
    }
    Ok(slot(i - 1, j - 1, n))
}

/// Inverse of [`pair_index`].
pub fn pair_at(index: usize, n: usize) -> Result<(usize, usize)> {
    if n < 2 || index >= pair_count(n) {
        return Err(Error::Parameter(format!(
            "pair index {index} out of range for n = {n}"
        )));
    }
    let i0 = index / (n - 1);
    let r = index % (n - 1);
    let j0 = if r < i0 { r } else { r + 1 };
    Ok((i0 + 1, j0 + 1))
}

/// All ordered pairs in coordinate order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
}

#[inline]
pub(crate) fn slot(i0: usize, j0: usize, n: usize) -> usize {
    i0 * (n - 1) + if j0 < i0 { j0 } else { j0 - 1 }
}

/// A weak order as its characteristic vector: bit `(i, j)` is set iff `i ⪰ j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeakOrder {
    n: u8,
    bits: u128,
}

impl WeakOrder {
    /// Checks totality and transitivity.
    pub fn from_bits(n: usize, bits: u128) -> Result<Self> {
        check_n(n)?;
        if pair_count(n) < 128 && bits >> pair_count(n) != 0 {
            return Err(Error::Invariant("bits set beyond n(n-1)".into()));
        }
        let w = WeakOrder { n: n as u8, bits };
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                if !w.bit(a, b) && !w.bit(b, a) {
                    return Err(Error::Invariant(format!(
                        "totality fails on ({}, {})",
                        a + 1,
                        b + 1
                    )));
                }
                if !w.bit(a, b) {
                    continue;
                }
                for c in 0..n {
                    if c != a && c != b && w.bit(b, c) && !w.bit(a, c) {
                        return Err(Error::Invariant(format!(
                            "transitivity fails on ({}, {}, {})",
                            a + 1,
                            b + 1,
                            c + 1
                        )));
                    }
                }
            }
        }
        Ok(w)
    }

    /// Builds the order `i ⪰ j iff ranks[i] <= ranks[j]` without validation of
    /// the rank multiset (every such relation is a weak order).
    pub(crate) fn from_rank_slice(ranks: &[u8]) -> Self {
        let n = ranks.len();
        let mut bits = 0u128;
        for a in 0..n {
            for b in 0..n {
                if a != b && ranks[a] <= ranks[b] {
                    bits |= 1u128 << slot(a, b, n);
                }
            }
        }
        WeakOrder { n: n as u8, bits }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub(crate) fn bit(&self, i0: usize, j0: usize) -> bool {
        self.bits >> slot(i0, j0, self.n()) & 1 == 1
    }

    /// `i ⪰ j` (1-based). Reflexive pairs answer `true`.
    pub fn prefers(&self, i: usize, j: usize) -> bool {
        assert!(i >= 1 && j >= 1 && i <= self.n() && j <= self.n());
        i == j || self.bit(i - 1, j - 1)
    }

    /// Dense 0/1 vector in coordinate order.
    pub fn to_vector(&self) -> Vec<u8> {
        (0..pair_count(self.n()))
            .map(|k| (self.bits >> k & 1) as u8)
            .collect()
    }

    pub fn to_ranking(&self) -> Ranking {
        let n = self.n();
        let ranks = (0..n)
            .map(|a| n - (0..n).filter(|&b| b != a && self.bit(a, b)).count())
            .collect();
        Ranking { ranks }
    }

    pub fn to_partition(&self) -> PreferencePartition {
        let ranking = self.to_ranking();
        ranking.to_partition_unchecked()
    }

    /// Reverses every preference: bit `(i, j)` becomes bit `(j, i)`.
    pub fn transpose(&self) -> WeakOrder {
        let n = self.n();
        let mut bits = 0u128;
        for a in 0..n {
            for b in 0..n {
                if a != b && self.bit(b, a) {
                    bits |= 1u128 << slot(a, b, n);
                }
            }
        }
        WeakOrder { n: self.n, bits }
    }
}

impl fmt::Debug for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeakOrder({})", self.to_partition())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::Dimension(format!(
            "n = {n} outside the supported range 1..={MAX_N}"
        )));
    }
    Ok(())
}

/// Competition ranks: `rank[i] = 1 + #{j : j strictly preferred to i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking {
    ranks: Vec<usize>,
}

impl Ranking {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        check_realizable(&ranks)?;
        Ok(Ranking { ranks })
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Rank of alternative `i` (1-based).
    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i - 1]
    }

    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    /// Buckets ordered by rank value.
    pub fn to_partition(&self) -> PreferencePartition {
        self.to_partition_unchecked()
    }

    fn to_partition_unchecked(&self) -> PreferencePartition {
        let values: BTreeSet<usize> = self.ranks.iter().copied().collect();
        let buckets = values
            .into_iter()
            .map(|v| {
                (1..=self.n())
                    .filter(|&i| self.ranks[i - 1] == v)
                    .collect::<Vec<_>>()
            })
            .collect();
        PreferencePartition { buckets }
    }

    pub fn to_weak_order(&self) -> Result<WeakOrder> {
        check_n(self.n())?;
        let r: Vec<u8> = self.ranks.iter().map(|&v| v as u8).collect();
        Ok(WeakOrder::from_rank_slice(&r))
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ranks.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `Ok` iff the sorted ranks start at 1 and each distinct value `k` with
/// multiplicity `m` is followed by `k + m`.
fn check_realizable(ranks: &[usize]) -> Result<()> {
    if ranks.is_empty() {
        return Err(Error::InvalidRanking("empty ranking".into()));
    }
    let mut sorted = ranks.to_vec();
    sorted.sort_unstable();
    let mut expected = 1;
    let mut pos = 0;
    while pos < sorted.len() {
        let v = sorted[pos];
        if v != expected {
            return Err(Error::InvalidRanking(format!(
                "{ranks:?}: expected rank value {expected}, found {v}"
            )));
        }
        let mult = sorted[pos..].iter().take_while(|&&x| x == v).count();
        pos += mult;
        expected = v + mult;
    }
    Ok(())
}

/// Ordered list of tie buckets; earlier buckets are strictly preferred.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferencePartition {
    buckets: Vec<Vec<usize>>,
}

impl PreferencePartition {
    /// Buckets must be nonempty, disjoint and cover `1..=n` for `n` equal to
    /// the total number of listed alternatives.
    pub fn new(buckets: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = buckets.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::with_capacity(buckets.len());
        for mut b in buckets {
            if b.is_empty() {
                return Err(Error::Invariant("empty bucket".into()));
            }
            for &a in &b {
                if a == 0 || a > n {
                    return Err(Error::Invariant(format!(
                        "alternative {a} outside 1..={n}"
                    )));
                }
                if seen[a] {
                    return Err(Error::Invariant(format!("alternative {a} repeated")));
                }
                seen[a] = true;
            }
            b.sort_unstable();
            out.push(b);
        }
        Ok(PreferencePartition { buckets: out })
    }

    pub fn n(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }

    pub fn buckets(&self) -> &[Vec<usize>] {
        &self.buckets
    }

    /// Number of buckets.
    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    /// Bucket `k` (1-based).
    pub fn bucket(&self, k: usize) -> &[usize] {
        &self.buckets[k - 1]
    }

    /// 1-based index of the bucket holding `alt`.
    pub fn bucket_of(&self, alt: usize) -> Option<usize> {
        self.buckets
            .iter()
            .position(|b| b.contains(&alt))
            .map(|k| k + 1)
    }

    pub fn to_characteristic(&self) -> Result<WeakOrder> {
        let n = self.n();
        check_n(n)?;
        let mut level = vec![0u8; n];
        for (k, b) in self.buckets.iter().enumerate() {
            for &a in b {
                level[a - 1] = k as u8;
            }
        }
        Ok(WeakOrder::from_rank_slice(&level))
    }

    pub fn to_ranking(&self) -> Ranking {
        let mut ranks = vec![0; self.n()];
        let mut above = 0;
        for b in &self.buckets {
            for &a in b {
                ranks[a - 1] = above + 1;
            }
            above += b.len();
        }
        Ranking { ranks }
    }

    /// Same buckets in reverse order (the transposed weak order).
    pub fn reversed(&self) -> PreferencePartition {
        let mut buckets = self.buckets.clone();
        buckets.reverse();
        PreferencePartition { buckets }
    }

    /// Renames alternative `a` to `labels[a - 1]`; `labels` must be a
    /// permutation of `1..=n`.
    pub fn relabel(&self, labels: &[usize]) -> Result<PreferencePartition> {
        if labels.len() != self.n() {
            return Err(Error::Parameter("relabeling has the wrong length".into()));
        }
        PreferencePartition::new(
            self.buckets
                .iter()
                .map(|b| b.iter().map(|&a| labels[a - 1]).collect())
                .collect(),
        )
    }

    /// Applies the move `m`; see [`apply_move`].
    pub fn moved(&self, m: &MoveSpec) -> Result<PreferencePartition> {
        apply_move(self, m)
    }
}

impl fmt::Display for PreferencePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .buckets
            .iter()
            .map(|b| {
                let items: Vec<String> = b.iter().map(|a| a.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Moves the tied alternatives `items` by `half_steps / 2` buckets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoveSpec {
    items: Vec<usize>,
    half_steps: i32,
}

impl MoveSpec {
    /// `q = half_steps / 2`.
    pub fn new(items: impl IntoIterator<Item = usize>, half_steps: i32) -> Result<Self> {
        let items: BTreeSet<usize> = items.into_iter().collect();
        if items.is_empty() {
            return Err(Error::InvalidMove("empty alternative set".into()));
        }
        if half_steps == 0 {
            return Err(Error::InvalidMove("zero steps".into()));
        }
        Ok(MoveSpec {
            items: items.into_iter().collect(),
            half_steps,
        })
    }

    /// Whole-bucket steps (`q` integer).
    pub fn steps(items: impl IntoIterator<Item = usize>, q: i32) -> Result<Self> {
        Self::new(items, 2 * q)
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn half_steps(&self) -> i32 {
        self.half_steps
    }
}

/// Integer `q`: the items join original bucket `k + q`. Half-integer `q`: the
/// items form a new bucket in the slot between original buckets `⌊k + q⌋` and
/// `⌊k + q⌋ + 1`. Bucket indices refer to the partition before removal; an
/// emptied source bucket is dropped afterwards.
pub fn apply_move(p: &PreferencePartition, m: &MoveSpec) -> Result<PreferencePartition> {
    let k = p.bucket_of(m.items[0]).ok_or_else(|| {
        Error::InvalidMove(format!("alternative {} not in partition", m.items[0]))
    })?;
    if m.items.iter().any(|&a| p.bucket_of(a) != Some(k)) {
        return Err(Error::InvalidMove(format!(
            "{:?} does not lie in a single bucket",
            m.items
        )));
    }
    let count = p.len() as i64;
    let (k2, t) = (2 * k as i64, m.half_steps as i64);
    // -k < q < p - k + 1
    if t <= -k2 || t >= 2 * (count - k as i64 + 1) {
        return Err(Error::InvalidMove(format!(
            "q = {}/2 out of range for bucket {k} of {count}",
            t
        )));
    }
    let target2 = k2 + t;
    let mut out: Vec<Vec<usize>> = Vec::with_capacity(p.len() + 1);
    let remaining = |b: usize| -> Vec<usize> {
        if b == k {
            p.bucket(b)
                .iter()
                .copied()
                .filter(|a| !m.items.contains(a))
                .collect()
        } else {
            p.bucket(b).to_vec()
        }
    };
    if target2 % 2 == 0 {
        let target = (target2 / 2) as usize;
        for b in 1..=p.len() {
            let mut bucket = remaining(b);
            if b == target {
                bucket.extend_from_slice(&m.items);
                bucket.sort_unstable();
            }
            out.push(bucket);
        }
    } else {
        let slot = target2.div_euclid(2) as usize;
        if slot == 0 {
            out.push(m.items.clone());
        }
        for b in 1..=p.len() {
            out.push(remaining(b));
            if b == slot {
                out.push(m.items.clone());
            }
        }
    }
    out.retain(|b| !b.is_empty());
    Ok(PreferencePartition { buckets: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(b: &[&[usize]]) -> PreferencePartition {
        PreferencePartition::new(b.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    fn sample_order() -> WeakOrder {
        let pairs = [(1, 2), (1, 3), (1, 4), (2, 1), (2, 3), (2, 4), (4, 3)];
        let bits = pairs
            .iter()
            .fold(0u128, |acc, &(i, j)| acc | 1 << pair_index(i, j, 4).unwrap());
        WeakOrder::from_bits(4, bits).unwrap()
    }

    #[test]
    fn pair_index_examples() {
        assert_eq!(pair_index(1, 2, 4).unwrap(), 0);
        assert_eq!(pair_index(2, 1, 4).unwrap(), 3);
        assert_eq!(pair_index(4, 3, 4).unwrap(), 11);
        assert!(pair_index(2, 2, 4).is_err());
        assert!(pair_index(5, 1, 4).is_err());
        assert!(pair_index(0, 1, 4).is_err());
    }

    #[test]
    fn pair_index_is_a_bijection() {
        for n in 2..=12 {
            let mut hit = vec![false; pair_count(n)];
            for (i, j) in pairs(n) {
                let k = pair_index(i, j, n).unwrap();
                assert!(!hit[k]);
                hit[k] = true;
                assert_eq!(pair_at(k, n).unwrap(), (i, j));
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn sample_order_representations() {
        let w = sample_order();
        assert_eq!(w.to_ranking().ranks(), &[1, 1, 4, 3]);
        assert_eq!(w.to_partition(), part(&[&[1, 2], &[4], &[3]]));
        assert_eq!(part(&[&[1, 2], &[4], &[3]]).to_characteristic().unwrap(), w);
        let r = Ranking::new(vec![1, 1, 4, 3]).unwrap();
        assert_eq!(r.to_partition(), part(&[&[1, 2], &[4], &[3]]));
    }

    #[test]
    fn total_tie_and_chain() {
        let tie = part(&[&[1, 2, 3, 4, 5]]).to_characteristic().unwrap();
        assert_eq!(tie.bits().count_ones() as usize, 20);
        assert_eq!(tie.to_ranking().ranks(), &[1, 1, 1, 1, 1]);
        assert_eq!(tie.transpose(), tie);
        assert_eq!(tie.to_partition().len(), 1);

        let chain = part(&[&[1], &[2], &[3], &[4]]).to_characteristic().unwrap();
        assert_eq!(chain.bits().count_ones(), 6);
        for i in 1..=4 {
            for j in 1..=4 {
                if i != j {
                    assert_eq!(chain.prefers(i, j), i < j);
                }
            }
        }
        assert_eq!(chain.to_ranking().ranks(), &[1, 2, 3, 4]);
        assert_eq!(
            chain.transpose(),
            part(&[&[4], &[3], &[2], &[1]]).to_characteristic().unwrap()
        );
        assert_eq!(chain.to_partition().len(), 4);
    }

    #[test]
    fn transpose_sample_order() {
        assert_eq!(sample_order().transpose().to_partition(), part(&[&[3], &[4], &[1, 2]]));
    }

    #[test]
    fn unrealizable_rankings() {
        assert!(Ranking::new(vec![2, 2, 3]).is_err());
        assert!(Ranking::new(vec![1, 1, 2, 4]).is_err());
        assert!(Ranking::new(vec![1, 2, 3, 4]).is_ok());
        assert!(Ranking::new(vec![]).is_err());
    }

    #[test]
    fn from_bits_rejects_intransitive() {
        // 1 ⪰ 2, 2 ⪰ 3, 3 ≻ 1
        let bits = [(1, 2), (2, 3), (3, 1)]
            .iter()
            .fold(0u128, |acc, &(i, j)| acc | 1 << pair_index(i, j, 3).unwrap());
        assert!(matches!(WeakOrder::from_bits(3, bits), Err(Error::Invariant(_))));
        assert!(matches!(WeakOrder::from_bits(3, 0), Err(Error::Invariant(_))));
    }

    #[test]
    fn malformed_partitions() {
        assert!(PreferencePartition::new(vec![vec![1], vec![]]).is_err());
        assert!(PreferencePartition::new(vec![vec![1, 1]]).is_err());
        assert!(PreferencePartition::new(vec![vec![1], vec![3]]).is_err());
    }

    #[test]
    fn move_examples() {
        let p = part(&[&[1, 2], &[4], &[3]]);
        let m = |items: &[usize], t: i32| MoveSpec::new(items.to_vec(), t).unwrap();
        assert_eq!(apply_move(&p, &m(&[2], 2)).unwrap(), part(&[&[1], &[2, 4], &[3]]));
        assert_eq!(
            apply_move(&part(&[&[1], &[2, 4], &[3]]), &m(&[2, 4], -2)).unwrap(),
            part(&[&[1, 2, 4], &[3]])
        );
        assert_eq!(apply_move(&p, &m(&[3], -4)).unwrap(), part(&[&[1, 2, 3], &[4]]));
        assert_eq!(
            apply_move(&part(&[&[1, 2, 3], &[4]]), &m(&[1, 3], 3)).unwrap(),
            part(&[&[2], &[4], &[1, 3]])
        );
        assert_eq!(apply_move(&p, &m(&[3], -5)).unwrap(), part(&[&[3], &[1, 2], &[4]]));
    }

    #[test]
    fn move_errors() {
        let p = part(&[&[1, 2], &[4], &[3]]);
        assert!(MoveSpec::new([1], 0).is_err());
        assert!(apply_move(&p, &MoveSpec::new([1, 4], 1).unwrap()).is_err());
        // bucket 1 of 3: need -1 < q < 3
        assert!(apply_move(&p, &MoveSpec::new([1], -2).unwrap()).is_err());
        assert!(apply_move(&p, &MoveSpec::new([1], 6).unwrap()).is_err());
        assert!(apply_move(&p, &MoveSpec::new([1], 5).unwrap()).is_ok());
        assert!(apply_move(&p, &MoveSpec::new([9], 1).unwrap()).is_err());
    }

    #[test]
    fn half_move_noop_when_bracketing_own_slot() {
        let p = part(&[&[1], &[2, 3], &[4]]);
        // whole bucket 2 to the slot right after bucket 2 or right before it
        assert_eq!(apply_move(&p, &MoveSpec::new([2, 3], 1).unwrap()).unwrap(), p);
        assert_eq!(apply_move(&p, &MoveSpec::new([2, 3], -1).unwrap()).unwrap(), p);
    }
}
