//! Rank-pattern descriptions of the weak orders that meet a T-class
//! inequality at equality.

use std::fmt;

use crate::inequalities::ClassTag;
use crate::order::WeakOrder;

/// A rank position: a constant, `n - c`, or `k + c` for the structure's free
/// position `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pos {
    At(usize),
    FromEnd(usize),
    K(usize),
}

impl Pos {
    fn value(self, n: usize, k: usize) -> usize {
        match self {
            Pos::At(c) => c,
            Pos::FromEnd(c) => n - c,
            Pos::K(c) => k + c,
        }
    }
}

/// One table row.
struct Pattern {
    number: u8,
    /// Rank of each fixed alternative, in fixed order.
    fixed: &'static [Pos],
    /// Unfixed witnesses tied at a position, named `j1, j2, ...` in order.
    ties: &'static [(Pos, usize)],
    /// Values `k` may not take.
    k_excluded: &'static [usize],
    /// Positions the remaining unfixed alternatives may not occupy.
    rest_excluded: &'static [Pos],
}

use Pos::{At, FromEnd, K};

const T1_TABLE: &[Pattern] = &[
    Pattern { number: 1, fixed: &[K(0)], ties: &[(K(0), 1)], k_excluded: &[], rest_excluded: &[K(0), K(1)] },
    Pattern { number: 2, fixed: &[K(0)], ties: &[(K(0), 2)], k_excluded: &[], rest_excluded: &[K(0), K(1), K(2)] },
];

const T2_0_TABLE: &[Pattern] = &[
    Pattern { number: 1, fixed: &[At(1), FromEnd(0)], ties: &[], k_excluded: &[], rest_excluded: &[At(1), FromEnd(0)] },
    Pattern { number: 2, fixed: &[At(1), FromEnd(0)], ties: &[(At(1), 1)], k_excluded: &[], rest_excluded: &[At(1), At(2), FromEnd(0)] },
    Pattern { number: 3, fixed: &[At(1), FromEnd(1)], ties: &[(FromEnd(1), 1)], k_excluded: &[], rest_excluded: &[At(1), FromEnd(1), FromEnd(0)] },
    Pattern {
        number: 4,
        fixed: &[At(1), FromEnd(1)],
        ties: &[(At(1), 1), (FromEnd(1), 1)],
        k_excluded: &[],
        rest_excluded: &[At(1), At(2), FromEnd(1), FromEnd(0)],
    },
];

const T2_1_1: Pattern = Pattern { number: 1, fixed: &[At(1), At(2)], ties: &[], k_excluded: &[], rest_excluded: &[At(1), At(2)] };
const T2_1_3: Pattern = Pattern { number: 3, fixed: &[At(1), At(3)], ties: &[(At(1), 1)], k_excluded: &[], rest_excluded: &[At(1), At(2), At(3)] };
const T2_1_4: Pattern = Pattern { number: 4, fixed: &[At(1), At(1)], ties: &[(At(1), 1)], k_excluded: &[], rest_excluded: &[At(1), At(2), At(3)] };
const T2_1_5: Pattern = Pattern { number: 5, fixed: &[K(0), At(1)], ties: &[(K(0), 1)], k_excluded: &[1], rest_excluded: &[At(1), K(0), K(1)] };
const T2_1_6: Pattern = Pattern { number: 6, fixed: &[K(0), At(1)], ties: &[(K(0), 2)], k_excluded: &[1], rest_excluded: &[At(1), K(0), K(1), K(2)] };

const T2_1_TABLE: &[Pattern] = &[
    T2_1_1,
    Pattern { number: 2, fixed: &[At(1), At(1)], ties: &[], k_excluded: &[], rest_excluded: &[At(1), At(2)] },
    T2_1_3,
    T2_1_4,
    T2_1_5,
    T2_1_6,
];

const fn renumber(p: Pattern, number: u8) -> Pattern {
    Pattern { number, ..p }
}

const T2_3_TABLE: &[Pattern] = &[
    renumber(T2_1_1, 1),
    Pattern { number: 2, fixed: &[At(1), At(2)], ties: &[(At(2), 1)], k_excluded: &[], rest_excluded: &[At(1), At(2), At(3)] },
    renumber(T2_1_3, 3),
    Pattern {
        number: 4,
        fixed: &[At(1), At(3)],
        ties: &[(At(1), 1), (At(3), 1)],
        k_excluded: &[],
        rest_excluded: &[At(1), At(2), At(3), At(4)],
    },
    renumber(T2_1_4, 5),
    Pattern { number: 6, fixed: &[At(1), At(1)], ties: &[(At(1), 2)], k_excluded: &[], rest_excluded: &[At(1), At(2), At(3), At(4)] },
    renumber(T2_1_5, 7),
    Pattern {
        number: 8,
        fixed: &[K(0), At(1)],
        ties: &[(K(0), 1), (At(1), 1)],
        k_excluded: &[1, 2],
        rest_excluded: &[At(1), At(2), K(0), K(1)],
    },
    renumber(T2_1_6, 9),
    Pattern {
        number: 10,
        fixed: &[K(0), At(1)],
        ties: &[(K(0), 2), (At(1), 1)],
        k_excluded: &[1, 2],
        rest_excluded: &[At(1), At(2), K(0), K(1), K(2)],
    },
];

/// A matched table row with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructureId {
    pub class: ClassTag,
    pub number: u8,
    /// The free position, where the row has one.
    pub k: Option<usize>,
    /// Unfixed alternatives tied with a fixed one, as `j1, j2, ...`.
    pub witnesses: Vec<usize>,
}

impl StructureId {
    /// `"T2-1#5"`.
    pub fn label(&self) -> String {
        format!("{}#{}", self.class, self.number)
    }
}

impl fmt::Display for StructureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        for (t, j) in self.witnesses.iter().enumerate() {
            write!(f, " j{}={j}", t + 1)?;
        }
        Ok(())
    }
}

fn table(class: ClassTag) -> Option<&'static [Pattern]> {
    match class {
        ClassTag::T1 => Some(T1_TABLE),
        ClassTag::T2_0 => Some(T2_0_TABLE),
        ClassTag::T2_1 => Some(T2_1_TABLE),
        ClassTag::T2_3 => Some(T2_3_TABLE),
        _ => None,
    }
}

/// Number of rows in the structure table of `class`.
pub fn structure_count(class: ClassTag) -> usize {
    match class {
        ClassTag::T2_2 => T2_1_TABLE.len(),
        ClassTag::T2_4 => T2_3_TABLE.len(),
        c => table(c).map_or(0, <[Pattern]>::len),
    }
}

/// First table row matched by `w`, or `None`. T2-2 and T2-4 are matched by
/// running the reversed order against the T2-1 and T2-3 rows.
pub fn classify_structure(class: ClassTag, fixed: &[usize], w: &WeakOrder) -> Option<StructureId> {
    let (rows, order) = match class {
        ClassTag::T2_2 => (T2_1_TABLE, w.transpose()),
        ClassTag::T2_4 => (T2_3_TABLE, w.transpose()),
        c => (table(c)?, *w),
    };
    let n = order.n();
    if fixed.is_empty() || fixed.iter().any(|&a| a == 0 || a > n) {
        return None;
    }
    let ranks = order.to_ranking().ranks().to_vec();
    rows.iter().find_map(|row| {
        matches(row, n, fixed, &ranks).map(|(k, witnesses)| StructureId {
            class,
            number: row.number,
            k,
            witnesses,
        })
    })
}

fn matches(row: &Pattern, n: usize, fixed: &[usize], ranks: &[usize]) -> Option<(Option<usize>, Vec<usize>)> {
    if row.fixed.len() != fixed.len() {
        return None;
    }
    let rank = |a: usize| ranks[a - 1];
    let k = row
        .fixed
        .iter()
        .zip(fixed)
        .find(|(p, _)| matches!(p, K(_)))
        .map(|(p, &a)| match p {
            K(c) => rank(a).checked_sub(*c),
            _ => unreachable!(),
        });
    let k = match k {
        Some(None) => return None,
        Some(Some(k)) if k < 1 || row.k_excluded.contains(&k) => return None,
        Some(Some(k)) => Some(k),
        None => None,
    };
    let kv = k.unwrap_or(0);
    if row
        .fixed
        .iter()
        .zip(fixed)
        .any(|(p, &a)| p.value(n, kv) != rank(a))
    {
        return None;
    }
    let unfixed: Vec<usize> = (1..=n).filter(|a| !fixed.contains(a)).collect();
    let mut witnesses = Vec::new();
    for &(pos, count) in row.ties {
        let at = pos.value(n, kv);
        let tied: Vec<usize> = unfixed.iter().copied().filter(|&j| rank(j) == at).collect();
        if tied.len() != count {
            return None;
        }
        witnesses.extend(tied);
    }
    let excluded: Vec<usize> = row.rest_excluded.iter().map(|p| p.value(n, kv)).collect();
    let mut seen = vec![false; n + 2];
    for &j in unfixed.iter().filter(|j| !witnesses.contains(j)) {
        let r = rank(j);
        if excluded.contains(&r) || seen[r] {
            return None;
        }
        seen[r] = true;
    }
    Some((k, witnesses))
}
