//! Inequality families over the weak order polytope: the axiomatic rows, the
//! one- and two-fixed-alternative classes T1 and T2-0..T2-4, the three-fixed
//! T3 candidates, the complete n = 4 catalog, zero-padding lifts and the
//! instance counts of each family.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::order::{pair_count, pair_index, pairs, WeakOrder};

/// Family tag carried by every inequality. The derived ordering is the
/// tie-break order used by separation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassTag {
    Ax1,
    Ax2,
    Ax3,
    T1,
    T2_0,
    T2_1,
    T2_2,
    T2_3,
    T2_4,
    /// Three fixed alternatives, variants 1..=8.
    T3(u8),
    /// Rows 1..=9 of the n = 4 catalog.
    Wo(u8),
    Lifted,
    Custom,
}

impl ClassTag {
    pub const T_CLASSES: [ClassTag; 6] = [
        ClassTag::T1,
        ClassTag::T2_0,
        ClassTag::T2_1,
        ClassTag::T2_2,
        ClassTag::T2_3,
        ClassTag::T2_4,
    ];

    /// The five classes that define facets for every n >= 4.
    pub const FACET_CLASSES: [ClassTag; 5] = [
        ClassTag::T1,
        ClassTag::T2_1,
        ClassTag::T2_2,
        ClassTag::T2_3,
        ClassTag::T2_4,
    ];

    /// Number of fixed alternatives for the T families.
    pub fn fixed_count(self) -> Option<usize> {
        match self {
            ClassTag::T1 => Some(1),
            ClassTag::T2_0 | ClassTag::T2_1 | ClassTag::T2_2 | ClassTag::T2_3 | ClassTag::T2_4 => {
                Some(2)
            }
            ClassTag::T3(_) => Some(3),
            _ => None,
        }
    }

    pub fn is_t_class(self) -> bool {
        self.fixed_count().is_some()
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::Ax1 => write!(f, "AX1"),
            ClassTag::Ax2 => write!(f, "AX2"),
            ClassTag::Ax3 => write!(f, "AX3"),
            ClassTag::T1 => write!(f, "T1"),
            ClassTag::T2_0 => write!(f, "T2-0"),
            ClassTag::T2_1 => write!(f, "T2-1"),
            ClassTag::T2_2 => write!(f, "T2-2"),
            ClassTag::T2_3 => write!(f, "T2-3"),
            ClassTag::T2_4 => write!(f, "T2-4"),
            ClassTag::T3(v) => write!(f, "T3-{v}"),
            ClassTag::Wo(v) => write!(f, "WO{v}"),
            ClassTag::Lifted => write!(f, "LIFTED"),
            ClassTag::Custom => write!(f, "CUSTOM"),
        }
    }
}

impl FromStr for ClassTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tag = match s.trim().to_ascii_uppercase().as_str() {
            "AX1" => ClassTag::Ax1,
            "AX2" => ClassTag::Ax2,
            "AX3" => ClassTag::Ax3,
            "T1" => ClassTag::T1,
            "T2-0" => ClassTag::T2_0,
            "T2-1" => ClassTag::T2_1,
            "T2-2" => ClassTag::T2_2,
            "T2-3" => ClassTag::T2_3,
            "T2-4" => ClassTag::T2_4,
            "LIFTED" => ClassTag::Lifted,
            "CUSTOM" => ClassTag::Custom,
            other => {
                let parsed = if let Some(v) = other.strip_prefix("T3-") {
                    v.parse::<u8>().ok().filter(|v| (1..=8).contains(v)).map(ClassTag::T3)
                } else if let Some(v) = other.strip_prefix("WO") {
                    v.parse::<u8>().ok().filter(|v| (1..=9).contains(v)).map(ClassTag::Wo)
                } else {
                    None
                };
                return parsed.ok_or_else(|| Error::Parameter(format!("unknown class tag {s:?}")));
            }
        };
        Ok(tag)
    }
}

/// Direction of an inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
        })
    }
}

/// Where a lifted inequality came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub class: ClassTag,
    pub n: usize,
    pub fixed: Vec<usize>,
}

/// `Σ π_(i,j) x_(i,j)  (<= | >=)  π₀` with a sparse integer coefficient map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    n: usize,
    coeffs: BTreeMap<(usize, usize), i64>,
    rhs: i64,
    sense: Sense,
    class: ClassTag,
    fixed: Vec<usize>,
    provenance: Option<Provenance>,
}

impl Inequality {
    /// A `CUSTOM` inequality; zero coefficients are dropped.
    pub fn custom(
        n: usize,
        coeffs: impl IntoIterator<Item = ((usize, usize), i64)>,
        rhs: i64,
        sense: Sense,
    ) -> Result<Self> {
        Self::tagged(ClassTag::Custom, n, Vec::new(), coeffs, rhs, sense)
    }

    /// Builds an inequality with an arbitrary tag; pairs are validated.
    pub fn tagged(
        class: ClassTag,
        n: usize,
        fixed: Vec<usize>,
        coeffs: impl IntoIterator<Item = ((usize, usize), i64)>,
        rhs: i64,
        sense: Sense,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((i, j), c) in coeffs {
            pair_index(i, j, n)?;
            if c != 0 {
                *map.entry((i, j)).or_insert(0) += c;
            }
        }
        map.retain(|_, c| *c != 0);
        Ok(Inequality {
            n,
            coeffs: map,
            rhs,
            sense,
            class,
            fixed,
            provenance: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rhs(&self) -> i64 {
        self.rhs
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn class(&self) -> ClassTag {
        self.class
    }

    pub fn fixed(&self) -> &[usize] {
        &self.fixed
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Nonzero coefficients keyed by 1-based ordered pair.
    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> i64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Dense coefficient vector in coordinate order.
    pub fn dense(&self) -> Vec<i64> {
        let mut v = vec![0; pair_count(self.n)];
        for (&(i, j), &c) in &self.coeffs {
            v[pair_index(i, j, self.n).expect("validated")] = c;
        }
        v
    }

    /// `(π, π₀)` of the equivalent `<=` inequality.
    pub fn le_form(&self) -> (Vec<i64>, i64) {
        let dense = self.dense();
        match self.sense {
            Sense::Le => (dense, self.rhs),
            Sense::Ge => (dense.into_iter().map(|c| -c).collect(), -self.rhs),
        }
    }

    /// Exact `π · x` for the characteristic vector of `w`.
    pub fn lhs(&self, w: &WeakOrder) -> Result<i64> {
        if w.n() != self.n {
            return Err(Error::Dimension(format!(
                "inequality on n = {} evaluated at a weak order on n = {}",
                self.n,
                w.n()
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .filter(|(&(i, j), _)| w.prefers(i, j))
            .map(|(_, &c)| c)
            .sum())
    }

    /// Coefficient map with every pair reversed: `π'_(a,b) = π_(b,a)`.
    pub fn transposed_coeffs(&self) -> BTreeMap<(usize, usize), i64> {
        self.coeffs.iter().map(|(&(i, j), &c)| ((j, i), c)).collect()
    }

    /// Coefficient-and-rhs identity, ignoring tags.
    pub fn same_inequality(&self, other: &Inequality) -> bool {
        self.n == other.n
            && self.coeffs == other.coeffs
            && self.rhs == other.rhs
            && self.sense == other.sense
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(i, j), &c) in &self.coeffs {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if !first {
                write!(f, " ")?;
            }
            if mag == 1 {
                write!(f, "{sign}x{i}_{j}")?;
            } else {
                write!(f, "{sign}{mag}x{i}_{j}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " {} {}", self.sense, self.rhs)
    }
}

/// The bound, totality and transitivity rows.
pub fn axiomatic_inequalities(n: usize) -> Result<Vec<Inequality>> {
    if n < 3 {
        return Err(Error::Dimension(format!("axiomatic rows need n >= 3, got {n}")));
    }
    let mut out = Vec::new();
    for (i, j) in pairs(n) {
        out.push(Inequality::tagged(ClassTag::Ax1, n, vec![i, j], [((i, j), 1)], 1, Sense::Le)?);
    }
    for (i, j) in pairs(n).filter(|(i, j)| i < j) {
        out.push(Inequality::tagged(
            ClassTag::Ax2,
            n,
            vec![i, j],
            [((i, j), 1), ((j, i), 1)],
            1,
            Sense::Ge,
        )?);
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                out.push(Inequality::tagged(
                    ClassTag::Ax3,
                    n,
                    vec![i, j, k],
                    [((i, j), 1), ((i, k), -1), ((k, j), -1)],
                    -1,
                    Sense::Ge,
                )?);
            }
        }
    }
    Ok(out)
}

/// Orientation of the uniform arc group joining a fixed alternative `i` with
/// the unfixed alternatives `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// Arcs `(i, j)`.
    FromFixed,
    /// Arcs `(j, i)`.
    ToFixed,
    /// Both.
    Both,
}

/// Sign and orientation of one uniform arc group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupArcs {
    pub sign: i64,
    pub orientation: Orientation,
}

impl GroupArcs {
    pub const fn new(sign: i64, orientation: Orientation) -> Self {
        GroupArcs { sign, orientation }
    }
}

/// Coefficient pattern around a fixed set: one optional arc group per fixed
/// alternative, explicit arcs among the fixed alternatives (by position), and
/// `-1` on every ordered pair of unfixed alternatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FixedPattern {
    pub groups: Vec<Option<GroupArcs>>,
    pub between: Vec<(usize, usize, i64)>,
}

impl FixedPattern {
    pub fn coeffs(&self, n: usize, fixed: &[usize]) -> BTreeMap<(usize, usize), i64> {
        let unfixed: Vec<usize> = (1..=n).filter(|a| !fixed.contains(a)).collect();
        let mut map = BTreeMap::new();
        for &j in &unfixed {
            for &k in &unfixed {
                if j != k {
                    map.insert((j, k), -1);
                }
            }
        }
        for (t, group) in self.groups.iter().enumerate() {
            let Some(g) = group else { continue };
            let i = fixed[t];
            for &j in &unfixed {
                if matches!(g.orientation, Orientation::FromFixed | Orientation::Both) {
                    *map.entry((i, j)).or_insert(0) += g.sign;
                }
                if matches!(g.orientation, Orientation::ToFixed | Orientation::Both) {
                    *map.entry((j, i)).or_insert(0) += g.sign;
                }
            }
        }
        for &(a, b, c) in &self.between {
            *map.entry((fixed[a], fixed[b])).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        map
    }
}

const PLUS_BOTH: Option<GroupArcs> = Some(GroupArcs::new(1, Orientation::Both));

/// `base - (n - a)(n - b) / 2`.
fn quadratic_rhs(base: i64, a: i64, b: i64, n: usize) -> i64 {
    let n = n as i64;
    base - (n - a) * (n - b) / 2
}

pub(crate) fn t_pattern(class: ClassTag) -> Option<FixedPattern> {
    use Orientation::*;
    let g = |s, o| Some(GroupArcs::new(s, o));
    let p = match class {
        ClassTag::T1 => FixedPattern {
            groups: vec![PLUS_BOTH],
            between: vec![],
        },
        ClassTag::T2_0 => FixedPattern {
            groups: vec![g(1, FromFixed), g(1, ToFixed)],
            between: vec![(1, 0, 1), (0, 1, -1)],
        },
        ClassTag::T2_1 => FixedPattern {
            groups: vec![PLUS_BOTH, g(-1, ToFixed)],
            between: vec![(0, 1, 1)],
        },
        ClassTag::T2_2 => FixedPattern {
            groups: vec![PLUS_BOTH, g(-1, FromFixed)],
            between: vec![(1, 0, 1)],
        },
        ClassTag::T2_3 => FixedPattern {
            groups: vec![PLUS_BOTH, g(1, FromFixed)],
            between: vec![(1, 0, -1)],
        },
        ClassTag::T2_4 => FixedPattern {
            groups: vec![PLUS_BOTH, g(1, ToFixed)],
            between: vec![(0, 1, -1)],
        },
        ClassTag::T3(v) => match v {
            1 => FixedPattern {
                groups: vec![PLUS_BOTH, g(-1, ToFixed), PLUS_BOTH],
                between: vec![(0, 1, 1), (2, 1, 1), (0, 2, -1), (2, 0, -1)],
            },
            2 => FixedPattern {
                groups: vec![PLUS_BOTH, g(-1, FromFixed), PLUS_BOTH],
                between: vec![(1, 0, 1), (1, 2, 1), (0, 2, -1), (2, 0, -1)],
            },
            3 => FixedPattern {
                groups: vec![PLUS_BOTH, PLUS_BOTH, g(-1, ToFixed)],
                between: vec![(0, 2, 1), (1, 2, 1), (0, 1, -1), (1, 0, -1)],
            },
            4 => FixedPattern {
                groups: vec![PLUS_BOTH, PLUS_BOTH, g(-1, FromFixed)],
                between: vec![(2, 0, 1), (2, 1, 1), (0, 1, -1), (1, 0, -1)],
            },
            5 => FixedPattern {
                groups: vec![PLUS_BOTH, g(1, ToFixed), PLUS_BOTH],
                between: vec![(0, 1, -1), (0, 2, -1), (2, 0, -1), (2, 1, -1)],
            },
            6 => FixedPattern {
                groups: vec![PLUS_BOTH, g(1, FromFixed), PLUS_BOTH],
                between: vec![(1, 0, -1), (0, 2, -1), (2, 0, -1), (1, 2, -1)],
            },
            7 => FixedPattern {
                groups: vec![PLUS_BOTH, PLUS_BOTH, g(1, ToFixed)],
                between: vec![(0, 1, -1), (1, 0, -1), (0, 2, -1), (1, 2, -1)],
            },
            8 => FixedPattern {
                groups: vec![PLUS_BOTH, PLUS_BOTH, g(1, FromFixed)],
                between: vec![(0, 1, -1), (1, 0, -1), (2, 0, -1), (2, 1, -1)],
            },
            _ => return None,
        },
        _ => return None,
    };
    Some(p)
}

/// Closed-form right-hand side of a T family at dimension `n`.
pub fn t_rhs(class: ClassTag, n: usize) -> Option<i64> {
    Some(match class {
        ClassTag::T1 => quadratic_rhs(2, 2, 3, n),
        ClassTag::T2_0 => quadratic_rhs(2, 4, 5, n),
        ClassTag::T2_1 | ClassTag::T2_2 => quadratic_rhs(2, 3, 4, n),
        ClassTag::T2_3 | ClassTag::T2_4 => quadratic_rhs(3, 4, 5, n),
        ClassTag::T3(1..=4) => quadratic_rhs(4, 5, 6, n),
        ClassTag::T3(5..=8) => quadratic_rhs(5, 6, 7, n),
        _ => return None,
    })
}

fn check_fixed(n: usize, fixed: &[usize], arity: usize, min_n: usize) -> Result<()> {
    if n < min_n {
        return Err(Error::Parameter(format!("n = {n} below the minimum {min_n}")));
    }
    if n > crate::order::MAX_N {
        return Err(Error::Dimension(format!("n = {n} exceeds {}", crate::order::MAX_N)));
    }
    if fixed.len() != arity {
        return Err(Error::Parameter(format!(
            "expected {arity} fixed alternatives, got {}",
            fixed.len()
        )));
    }
    let distinct: HashSet<_> = fixed.iter().collect();
    if distinct.len() != fixed.len() {
        return Err(Error::Parameter(format!("duplicate fixed alternatives {fixed:?}")));
    }
    if let Some(&a) = fixed.iter().find(|&&a| a == 0 || a > n) {
        return Err(Error::Parameter(format!("fixed alternative {a} outside 1..={n}")));
    }
    Ok(())
}

/// Instantiates T1 (one fixed alternative) or T2-0..T2-4 (two).
pub fn make_vi(class: ClassTag, n: usize, fixed: &[usize]) -> Result<Inequality> {
    let arity = match class {
        ClassTag::T1 => 1,
        ClassTag::T2_0 | ClassTag::T2_1 | ClassTag::T2_2 | ClassTag::T2_3 | ClassTag::T2_4 => 2,
        other => {
            return Err(Error::Parameter(format!(
                "{other} is not a one- or two-fixed class"
            )))
        }
    };
    check_fixed(n, fixed, arity, 4)?;
    let rhs = t_rhs(class, n).expect("T class");
    // the mirrored classes are the pairwise transposes of T2-1 / T2-3
    let coeffs = match class {
        ClassTag::T2_2 => make_vi(ClassTag::T2_1, n, fixed)?.transposed_coeffs(),
        ClassTag::T2_4 => make_vi(ClassTag::T2_3, n, fixed)?.transposed_coeffs(),
        _ => t_pattern(class).expect("T class").coeffs(n, fixed),
    };
    Inequality::tagged(class, n, fixed.to_vec(), coeffs, rhs, Sense::Le)
}

/// Instantiates the three-fixed variant `variant` (1..=8).
pub fn make_t3_vi(variant: u8, n: usize, fixed: &[usize]) -> Result<Inequality> {
    if !(1..=8).contains(&variant) {
        return Err(Error::Parameter(format!("T3 variant {variant} outside 1..=8")));
    }
    check_fixed(n, fixed, 3, 5)?;
    let class = ClassTag::T3(variant);
    let coeffs = t_pattern(class).expect("variant checked").coeffs(n, fixed);
    Inequality::tagged(class, n, fixed.to_vec(), coeffs, t_rhs(class, n).unwrap(), Sense::Le)
}

/// Dispatches on the class: T1/T2-* through [`make_vi`], T3-* through
/// [`make_t3_vi`], WO* from the catalog (`n` must be 4, `fixed` empty).
pub fn instantiate(class: ClassTag, n: usize, fixed: &[usize]) -> Result<Inequality> {
    match class {
        ClassTag::T3(v) => make_t3_vi(v, n, fixed),
        ClassTag::Wo(v) => {
            if n != 4 || !fixed.is_empty() {
                return Err(Error::Parameter("catalog rows are defined at n = 4 with no fixed list".into()));
            }
            Ok(wo4_catalog().swap_remove(v as usize - 1))
        }
        _ => make_vi(class, n, fixed),
    }
}

/// Places `q` on the alternatives `labels` of a larger ground set: alternative
/// `a` of `q` becomes `labels[a - 1]`; pairs touching other alternatives get 0.
pub fn embed(q: &Inequality, n_target: usize, labels: &[usize]) -> Result<Inequality> {
    if n_target <= q.n {
        return Err(Error::Parameter(format!(
            "target n = {n_target} must exceed n = {}",
            q.n
        )));
    }
    if labels.len() != q.n
        || labels.iter().collect::<HashSet<_>>().len() != labels.len()
        || labels.iter().any(|&l| l == 0 || l > n_target)
    {
        return Err(Error::Parameter(format!("bad label map {labels:?}")));
    }
    let coeffs = q
        .coeffs
        .iter()
        .map(|(&(i, j), &c)| ((labels[i - 1], labels[j - 1]), c));
    let mut out = Inequality::tagged(
        ClassTag::Lifted,
        n_target,
        q.fixed.iter().map(|&a| labels[a - 1]).collect(),
        coeffs,
        q.rhs,
        q.sense,
    )?;
    out.provenance = Some(match &q.provenance {
        Some(p) => p.clone(),
        None => Provenance {
            class: q.class,
            n: q.n,
            fixed: q.fixed.clone(),
        },
    });
    Ok(out)
}

/// Zero-padding lift to `n_target` alternatives.
pub fn lift(q: &Inequality, n_target: usize) -> Result<Inequality> {
    let labels: Vec<usize> = (1..=q.n).collect();
    embed(q, n_target, &labels)
}

/// Table columns in the order the catalog lists them.
const WO4_COLUMNS: [(usize, usize); 12] = [
    (1, 2),
    (2, 1),
    (1, 3),
    (3, 1),
    (1, 4),
    (4, 1),
    (2, 3),
    (3, 2),
    (2, 4),
    (4, 2),
    (3, 4),
    (4, 3),
];

/// Coefficients, right-hand side and label-permutation count of each row.
const WO4_ROWS: [([i64; 12], i64, u32); 9] = [
    ([1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], 1, 12),
    ([-1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], -1, 6),
    // printed with right-hand side -1, which no weak order satisfies; the
    // transitivity row x12 + x23 - x13 <= 1 is meant
    ([1, 0, -1, 0, 0, 0, 1, 0, 0, 0, 0, 0], 1, 24),
    ([1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1], 1, 4),
    ([-1, 1, 1, 0, 1, 0, 0, 1, 0, 1, -1, -1], 2, 12),
    ([1, 0, 1, 1, 1, 1, 0, -1, 0, -1, -1, -1], 2, 12),
    ([0, 1, 1, 1, 1, 1, -1, 0, -1, 0, -1, -1], 2, 12),
    ([-1, 0, 1, 1, 1, 1, 0, 1, 0, 1, -1, -1], 3, 12),
    ([0, -1, 1, 1, 1, 1, 1, 0, 1, 0, -1, -1], 3, 12),
];

/// The nine facet classes of the n = 4 polytope, labels `j_k = k`.
pub fn wo4_catalog() -> Vec<Inequality> {
    WO4_ROWS
        .iter()
        .enumerate()
        .map(|(r, (coeffs, rhs, _))| {
            Inequality::tagged(
                ClassTag::Wo(r as u8 + 1),
                4,
                Vec::new(),
                WO4_COLUMNS.iter().copied().zip(coeffs.iter().copied()),
                *rhs,
                Sense::Le,
            )
            .expect("catalog pairs are valid")
        })
        .collect()
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for t in 0..k {
        acc = acc * BigUint::from(n - t) / BigUint::from(t + 1);
    }
    acc
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Smallest dimension at which a T family is defined.
fn t_min_n(class: ClassTag) -> usize {
    match class {
        ClassTag::T3(_) => 5,
        _ => 4,
    }
}

/// Number of inequalities a family generates on `[n]`.
///
/// WO4..WO9: `C(n, 4)` times the n = 4 permutation count. WO1..WO3 are the
/// axiomatic rows and count `n(n-1)`, `n(n-1)/2` and `n(n-1)(n-2)`. T families
/// with `i` fixed alternatives: `Σ_{m} C(n, m) C(m, i) i!` over every
/// dimension `m` at which the family is defined.
pub fn class_cardinality(class: ClassTag, n: usize) -> Result<BigUint> {
    if n < 4 {
        return Err(Error::Parameter(format!("cardinalities need n >= 4, got {n}")));
    }
    let big = BigUint::from;
    match class {
        ClassTag::Wo(1) | ClassTag::Ax1 => Ok(big(n * (n - 1))),
        ClassTag::Wo(2) | ClassTag::Ax2 => Ok(big(n * (n - 1) / 2)),
        ClassTag::Wo(3) | ClassTag::Ax3 => Ok(big(n * (n - 1) * (n - 2))),
        ClassTag::Wo(v @ 4..=9) => Ok(binomial(n, 4) * WO4_ROWS[v as usize - 1].2),
        c if c.is_t_class() => {
            let i = c.fixed_count().unwrap();
            Ok((t_min_n(c)..=n)
                .map(|m| binomial(n, m) * binomial(m, i) * factorial(i))
                .sum())
        }
        other => Err(Error::Parameter(format!("no cardinality for {other}"))),
    }
}

/// Result of instantiating a family on every sub-ground-set and fixed tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstantiationCount {
    pub total: usize,
    pub distinct: usize,
}

impl InstantiationCount {
    pub fn collisions(&self) -> usize {
        self.total - self.distinct
    }
}

type Term = (usize, usize, i64);

/// Builds every `(m, subset, fixed tuple)` instance of a T family inside
/// `[n]` and counts distinct inequalities.
pub fn count_instantiations(class: ClassTag, n: usize) -> Result<InstantiationCount> {
    let arity = class
        .fixed_count()
        .ok_or_else(|| Error::Parameter(format!("{class} is not a T family")))?;
    let mut seen: HashSet<(Vec<Term>, i64)> = HashSet::new();
    let mut total = 0;
    for m in t_min_n(class)..=n {
        for subset in combinations(n, m) {
            for tuple in ordered_tuples(m, arity) {
                let local = instantiate(class, m, &tuple)?;
                let placed = if m == n {
                    local
                } else {
                    embed(&local, n, &subset)?
                };
                total += 1;
                let key = placed
                    .coeffs()
                    .iter()
                    .map(|(&(i, j), &c)| (i, j, c))
                    .collect();
                seen.insert((key, placed.rhs()));
            }
        }
    }
    Ok(InstantiationCount {
        total,
        distinct: seen.len(),
    })
}

/// All `k`-subsets of `1..=n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..=n {
            if n - a + 1 < k - cur.len() {
                break;
            }
            cur.push(a);
            go(a + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// All ordered `k`-tuples of distinct elements of `1..=n`, lexicographic.
pub fn ordered_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in 1..=n {
            if !cur.contains(&a) {
                cur.push(a);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::new(), &mut out);
    out
}

/// `weak` is dominated by `strong` when some `μ > 0` gives
/// `π_strong >= μ π_weak` and `π₀_strong <= μ π₀_weak`, not both with
/// equality everywhere. Inequalities on fewer alternatives are lifted first.
/// Both must be in `<=` sense.
pub fn is_dominated_by(weak: &Inequality, strong: &Inequality) -> Result<bool> {
    if weak.sense != Sense::Le || strong.sense != Sense::Le {
        return Err(Error::Parameter("dominance is defined on <= inequalities".into()));
    }
    let n = weak.n.max(strong.n);
    let pad = |q: &Inequality| if q.n < n { lift(q, n) } else { Ok(q.clone()) };
    let (w, s) = (pad(weak)?, pad(strong)?);
    let (wd, sd) = (w.dense(), s.dense());

    // feasible μ interval: lo < μ (open at 0) ... hi
    let mut lo: Option<Ratio<i64>> = None; // inclusive lower bound
    let mut hi: Option<Ratio<i64>> = None; // inclusive upper bound
    let mut constraints: Vec<(i64, i64)> = wd.iter().copied().zip(sd.iter().copied()).collect();
    // rhs: π₀_s <= μ π₀_w   <=>   (-π₀_s) >= μ (-π₀_w)
    constraints.push((-w.rhs, -s.rhs));
    for (a, b) in constraints {
        // b >= μ a
        match a.signum() {
            0 => {
                if b < 0 {
                    return Ok(false);
                }
            }
            1 => {
                let r = Ratio::new(b, a);
                hi = Some(hi.map_or(r, |h| h.min(r)));
            }
            _ => {
                let r = Ratio::new(b, a);
                lo = Some(lo.map_or(r, |l| l.max(r)));
            }
        }
    }
    let zero = Ratio::from_integer(0);
    if let Some(h) = hi {
        if h <= zero {
            return Ok(false);
        }
        if let Some(l) = lo {
            if l > h {
                return Ok(false);
            }
        }
    }
    // a feasible μ exists; it is strict unless every constraint is tight,
    // which forces proportionality with a single μ
    let proportional = match hi.or(lo) {
        Some(mu) if mu > zero => {
            wd.iter().zip(&sd).all(|(&a, &b)| Ratio::from_integer(b) == mu * a)
                && Ratio::from_integer(s.rhs) == mu * w.rhs
                && lo.is_none_or(|l| l == mu)
                && hi.is_none_or(|h| h == mu)
        }
        _ => false,
    };
    Ok(!proportional)
}
