//! Template search: uniform arc-group coefficient patterns around one or two
//! fixed alternatives, their exhaustive maxima, fitted right-hand-side laws
//! and facet scans.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::inequalities::{ClassTag, FixedPattern, GroupArcs, Inequality, Orientation, Sense};
use crate::order::{pair_count, WeakOrder};
use crate::verify::{order_affine_rank, Exhaustive, Lhs};

/// One of the seven per-group choices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcSymbol {
    None,
    Plus(Orientation),
    Minus(Orientation),
}

impl ArcSymbol {
    pub const ALL: [ArcSymbol; 7] = [
        ArcSymbol::None,
        ArcSymbol::Plus(Orientation::FromFixed),
        ArcSymbol::Plus(Orientation::ToFixed),
        ArcSymbol::Plus(Orientation::Both),
        ArcSymbol::Minus(Orientation::FromFixed),
        ArcSymbol::Minus(Orientation::ToFixed),
        ArcSymbol::Minus(Orientation::Both),
    ];

    fn group(self) -> Option<GroupArcs> {
        match self {
            ArcSymbol::None => None,
            ArcSymbol::Plus(o) => Some(GroupArcs::new(1, o)),
            ArcSymbol::Minus(o) => Some(GroupArcs::new(-1, o)),
        }
    }

    /// `(forward, backward)` coefficients when used on the fixed-pair slot.
    fn slot(self) -> SlotArcs {
        let (f, b) = match self.group() {
            None => (0, 0),
            Some(GroupArcs { sign, orientation }) => match orientation {
                Orientation::FromFixed => (sign, 0),
                Orientation::ToFixed => (0, sign),
                Orientation::Both => (sign, sign),
            },
        };
        SlotArcs { forward: f, backward: b }
    }

    fn flipped(self) -> ArcSymbol {
        let flip = |o| match o {
            Orientation::FromFixed => Orientation::ToFixed,
            Orientation::ToFixed => Orientation::FromFixed,
            Orientation::Both => Orientation::Both,
        };
        match self {
            ArcSymbol::None => ArcSymbol::None,
            ArcSymbol::Plus(o) => ArcSymbol::Plus(flip(o)),
            ArcSymbol::Minus(o) => ArcSymbol::Minus(flip(o)),
        }
    }
}

impl fmt::Display for ArcSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = |o: &Orientation| match o {
            Orientation::FromFixed => "->",
            Orientation::ToFixed => "<-",
            Orientation::Both => "<->",
        };
        match self {
            ArcSymbol::None => f.write_str("."),
            ArcSymbol::Plus(o) => write!(f, "+{}", arrow(o)),
            ArcSymbol::Minus(o) => write!(f, "-{}", arrow(o)),
        }
    }
}

/// Coefficients on `(i1, i2)` and `(i2, i1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotArcs {
    pub forward: i64,
    pub backward: i64,
}

impl SlotArcs {
    /// The uniform symbol, or `None` for a mixed-sign slot.
    pub fn symbol(self) -> Option<ArcSymbol> {
        ArcSymbol::ALL.into_iter().find(|s| s.slot() == self)
    }
}

impl fmt::Display for SlotArcs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.symbol() {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "mix(->{:+},<-{:+})", self.forward, self.backward),
        }
    }
}

/// A coefficient pattern: one symbol per fixed alternative for its arcs to
/// the unfixed alternatives, the fixed-pair slot when there are two, and
/// `-1` on every pair of unfixed alternatives unless `unfixed_pairs` is off.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Template {
    groups: Vec<ArcSymbol>,
    slot: Option<SlotArcs>,
    unfixed_pairs: bool,
}

impl Template {
    pub fn new(groups: Vec<ArcSymbol>, slot: Option<SlotArcs>) -> Result<Self> {
        match (groups.len(), slot) {
            (1, None) | (2, Some(_)) => Ok(Template {
                groups,
                slot,
                unfixed_pairs: true,
            }),
            _ => Err(Error::Parameter(
                "templates take one group, or two groups and a slot".into(),
            )),
        }
    }

    /// Every coefficient zero, including the unfixed pairs.
    pub fn zero(num_fixed: usize) -> Result<Self> {
        let slot = (num_fixed == 2).then_some(SlotArcs { forward: 0, backward: 0 });
        let mut t = Template::new(vec![ArcSymbol::None; num_fixed], slot)?;
        t.unfixed_pairs = false;
        Ok(t)
    }

    /// The pattern behind a featured class.
    pub fn featured(class: ClassTag) -> Result<Self> {
        use ArcSymbol::*;
        use Orientation::*;
        let slot = |f, b| Some(SlotArcs { forward: f, backward: b });
        match class {
            ClassTag::T1 => Template::new(vec![Plus(Both)], Option::None),
            ClassTag::T2_0 => Template::new(vec![Plus(FromFixed), Plus(ToFixed)], slot(-1, 1)),
            ClassTag::T2_1 => Template::new(vec![Plus(Both), Minus(ToFixed)], slot(1, 0)),
            ClassTag::T2_2 => Template::new(vec![Plus(Both), Minus(FromFixed)], slot(0, 1)),
            ClassTag::T2_3 => Template::new(vec![Plus(Both), Plus(FromFixed)], slot(0, -1)),
            ClassTag::T2_4 => Template::new(vec![Plus(Both), Plus(ToFixed)], slot(-1, 0)),
            other => Err(Error::Parameter(format!("{other} has no one- or two-fixed template"))),
        }
    }

    pub fn num_fixed(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[ArcSymbol] {
        &self.groups
    }

    pub fn slot(&self) -> Option<SlotArcs> {
        self.slot
    }

    /// True when every group, slot included, uses one of the seven symbols.
    pub fn is_uniform(&self) -> bool {
        self.slot.is_none_or(|s| s.symbol().is_some())
    }

    /// The featured class this template instantiates, if any.
    pub fn featured_class(&self) -> Option<ClassTag> {
        ClassTag::T_CLASSES
            .into_iter()
            .find(|&c| Template::featured(c).is_ok_and(|t| &t == self))
    }

    /// Same inequality with the roles of `i1` and `i2` exchanged.
    pub fn swapped(&self) -> Template {
        let mut t = self.clone();
        t.groups.reverse();
        t.slot = self.slot.map(|s| SlotArcs {
            forward: s.backward,
            backward: s.forward,
        });
        t
    }

    /// Pattern whose instances are the pairwise transposes.
    pub fn transposed(&self) -> Template {
        let mut t = self.clone();
        t.groups = self.groups.iter().map(|g| g.flipped()).collect();
        t.slot = self.slot.map(|s| SlotArcs {
            forward: s.backward,
            backward: s.forward,
        });
        t
    }

    fn pattern(&self) -> FixedPattern {
        let mut between = Vec::new();
        if let Some(s) = self.slot {
            between.push((0, 1, s.forward));
            between.push((1, 0, s.backward));
        }
        FixedPattern {
            groups: self.groups.iter().map(|g| g.group()).collect(),
            between,
        }
    }

    /// Reads a coefficient map back into a template; fails when an arc
    /// group is not uniform.
    pub fn from_inequality(q: &Inequality) -> Result<Template> {
        let fixed = q.fixed();
        let n = q.n();
        if !(1..=2).contains(&fixed.len()) || n < fixed.len() + 2 {
            return Err(Error::Parameter("need one or two fixed alternatives and two unfixed".into()));
        }
        let unfixed: Vec<usize> = (1..=n).filter(|a| !fixed.contains(a)).collect();
        let uniform = |f: &dyn Fn(usize) -> i64| -> Option<i64> {
            let first = f(unfixed[0]);
            unfixed.iter().all(|&j| f(j) == first).then_some(first)
        };
        let pairs_coeff = uniform(&|j| {
            let k = unfixed.iter().copied().find(|&k| k != j).unwrap();
            q.coeff(j, k)
        });
        let all_pairs_same = unfixed
            .iter()
            .flat_map(|&j| unfixed.iter().filter(move |&&k| k != j).map(move |&k| (j, k)))
            .map(|(j, k)| q.coeff(j, k))
            .collect::<Vec<_>>();
        let unfixed_pairs = match pairs_coeff {
            Some(-1) if all_pairs_same.iter().all(|&c| c == -1) => true,
            Some(0) if all_pairs_same.iter().all(|&c| c == 0) => false,
            _ => return Err(Error::Parameter("unfixed pairs are not uniformly -1 or 0".into())),
        };
        let mut groups = Vec::new();
        for &i in fixed {
            let out = uniform(&|j| q.coeff(i, j));
            let inn = uniform(&|j| q.coeff(j, i));
            let (Some(out), Some(inn)) = (out, inn) else {
                return Err(Error::Parameter(format!("arcs at {i} are not uniform")));
            };
            let symbol = ArcSymbol::ALL
                .into_iter()
                .find(|s| {
                    let sl = s.slot();
                    (sl.forward, sl.backward) == (out, inn)
                })
                .ok_or_else(|| Error::Parameter(format!("arcs at {i} mix signs")))?;
            groups.push(symbol);
        }
        let slot = (fixed.len() == 2).then(|| SlotArcs {
            forward: q.coeff(fixed[0], fixed[1]),
            backward: q.coeff(fixed[1], fixed[0]),
        });
        Ok(Template {
            groups,
            slot,
            unfixed_pairs,
        })
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self.groups.iter().map(|g| g.to_string()).collect();
        write!(f, "[{}", groups.join(" "))?;
        if let Some(s) = self.slot {
            write!(f, " | {s}")?;
        }
        if !self.unfixed_pairs {
            write!(f, " | 0")?;
        }
        write!(f, "]")
    }
}

/// All uniform templates: 7 for one fixed alternative, 343 for two, in
/// lexicographic symbol order (slot varying fastest).
pub fn enumerate_templates(num_fixed: usize) -> Result<Vec<Template>> {
    match num_fixed {
        1 => ArcSymbol::ALL
            .into_iter()
            .map(|g| Template::new(vec![g], None))
            .collect(),
        2 => {
            let mut out = Vec::with_capacity(343);
            for g1 in ArcSymbol::ALL {
                for g2 in ArcSymbol::ALL {
                    for s in ArcSymbol::ALL {
                        out.push(Template::new(vec![g1, g2], Some(s.slot()))?);
                    }
                }
            }
            Ok(out)
        }
        3 => Err(Error::Parameter(
            "three fixed alternatives are covered only by the T3-1..T3-8 classes".into(),
        )),
        k => Err(Error::Parameter(format!("unsupported fixed count {k}"))),
    }
}

/// Coefficient map of `t` with fixed alternatives `fixed`.
pub fn template_lhs(t: &Template, n: usize, fixed: &[usize]) -> Result<BTreeMap<(usize, usize), i64>> {
    let k = t.num_fixed();
    if fixed.len() != k {
        return Err(Error::Parameter(format!("template needs {k} fixed alternatives")));
    }
    if n < k + 2 || n > crate::order::MAX_N {
        return Err(Error::Parameter(format!("n = {n} outside {}..={}", k + 2, crate::order::MAX_N)));
    }
    if fixed.iter().any(|&a| a == 0 || a > n) || (k == 2 && fixed[0] == fixed[1]) {
        return Err(Error::Parameter(format!("bad fixed alternatives {fixed:?}")));
    }
    let mut map = t.pattern().coeffs(n, fixed);
    if !t.unfixed_pairs {
        map.retain(|(i, j), _| fixed.contains(i) || fixed.contains(j));
    }
    Ok(map)
}

/// `template_lhs(t, n, 1..=k) <= rhs` as an inequality.
pub fn template_inequality(t: &Template, n: usize, rhs: i64) -> Result<Inequality> {
    let fixed: Vec<usize> = (1..=t.num_fixed()).collect();
    let coeffs = template_lhs(t, n, &fixed)?;
    let class = t.featured_class().unwrap_or(ClassTag::Custom);
    Inequality::tagged(class, n, fixed, coeffs, rhs, Sense::Le)
}

/// Exact maximum of `π · x` over every weak order on `[n]`, with the weak
/// orders attaining it.
pub fn max_over_weak_orders(
    coeffs: &BTreeMap<(usize, usize), i64>,
    n: usize,
    mode: &Exhaustive,
) -> Result<(i64, Vec<WeakOrder>)> {
    Lhs::new(n, coeffs)?.maximize(mode)
}

/// Outcome of checking a fitted law on held-out sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Confirmed,
    Refuted,
}

/// `rhs(n) = a + b n + c n²` through observed maxima.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhsLaw {
    pub a: Ratio<i64>,
    pub b: Ratio<i64>,
    pub c: Ratio<i64>,
    pub fit: Vec<usize>,
    /// `(n, observed maximum)` for every size used.
    pub observed: Vec<(usize, i64)>,
    pub holdout: Vec<usize>,
    pub verdict: Verdict,
}

impl RhsLaw {
    pub fn eval(&self, n: usize) -> Ratio<i64> {
        let n = Ratio::from_integer(n as i64);
        self.a + self.b * n + self.c * n * n
    }

    /// True when the law matches `base - (n - p)(n - q) / 2`.
    pub fn matches_shifted_triangle(&self, base: i64, p: i64, q: i64) -> bool {
        let half = Ratio::new(1, 2);
        self.c == -half && self.b == half * (p + q) && self.a == Ratio::from_integer(base) - half * (p * q)
    }
}

impl fmt::Display for RhsLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*n + {}*n^2", self.a, self.b, self.c)
    }
}

/// Quadratic through three points, exact.
fn interpolate(points: &[(i64, i64)]) -> (Ratio<i64>, Ratio<i64>, Ratio<i64>) {
    let mut coef = [Ratio::from_integer(0); 3];
    for (k, &(xk, yk)) in points.iter().enumerate() {
        // basis polynomial ∏ (x - xm) / (xk - xm)
        let mut poly = [Ratio::from_integer(1), Ratio::from_integer(0), Ratio::from_integer(0)];
        let mut denom = 1;
        for (m, &(xm, _)) in points.iter().enumerate() {
            if m == k {
                continue;
            }
            let mut next = [Ratio::from_integer(0); 3];
            for d in 0..2 {
                next[d + 1] += poly[d];
                next[d] -= poly[d] * xm;
            }
            poly = next;
            denom *= xk - xm;
        }
        for d in 0..3 {
            coef[d] += poly[d] * yk / denom;
        }
    }
    (coef[0], coef[1], coef[2])
}

/// Fits a quadratic law to the exhaustive maxima of `t` over `fit` (at least
/// three consecutive sizes) and checks it at every `holdout` size. The fixed
/// alternatives are `1..=k`.
pub fn infer_rhs(t: &Template, fit: &[usize], holdout: &[usize], mode: &Exhaustive) -> Result<RhsLaw> {
    if fit.len() < 3 || fit.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::Parameter("fit range needs three or more consecutive sizes".into()));
    }
    let fixed: Vec<usize> = (1..=t.num_fixed()).collect();
    let mut observed = Vec::new();
    for &n in fit.iter().chain(holdout) {
        let coeffs = template_lhs(t, n, &fixed)?;
        let (max, _) = max_over_weak_orders(&coeffs, n, mode)?;
        observed.push((n, max));
    }
    let pts: Vec<(i64, i64)> = observed[..3].iter().map(|&(n, m)| (n as i64, m)).collect();
    let (a, b, c) = interpolate(&pts);
    let mut law = RhsLaw {
        a,
        b,
        c,
        fit: fit.to_vec(),
        observed,
        holdout: holdout.to_vec(),
        verdict: Verdict::Confirmed,
    };
    if law.observed[3..].iter().any(|&(n, m)| law.eval(n) != Ratio::from_integer(m)) {
        law.verdict = Verdict::Refuted;
    }
    Ok(law)
}

/// One template's scan result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    /// Position in [`enumerate_templates`]; `None` for the extra rows.
    pub index: Option<usize>,
    pub template: Template,
    pub featured: Option<ClassTag>,
    pub max_lhs: i64,
    pub tight_count: usize,
    pub affine_rank: usize,
    pub is_facet: bool,
    /// Index of the first template in the same orbit under swapping the
    /// fixed alternatives and transposing.
    pub equivalent_to: Option<usize>,
}

/// Results of a scan over all templates for one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub num_fixed: usize,
    pub n: usize,
    pub rows: Vec<ScanRow>,
    /// Featured templates outside the uniform grid.
    pub extra: Vec<ScanRow>,
}

impl ScanReport {
    pub fn facet_indices(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| r.is_facet).filter_map(|r| r.index).collect()
    }

    /// Featured classes and whether each was facet-flagged.
    pub fn featured(&self) -> Vec<(ClassTag, bool)> {
        self.rows
            .iter()
            .chain(&self.extra)
            .filter_map(|r| r.featured.map(|c| (c, r.is_facet)))
            .collect()
    }

    /// Facet-flagged templates that are not featured classes.
    pub fn unfeatured_facets(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| r.is_facet && r.featured.is_none()).collect()
    }
}

fn scan_one(t: &Template, n: usize, mode: &Exhaustive) -> Result<(i64, usize, usize)> {
    let fixed: Vec<usize> = (1..=t.num_fixed()).collect();
    let coeffs = template_lhs(t, n, &fixed)?;
    let (max, tight) = max_over_weak_orders(&coeffs, n, mode)?;
    let rank = order_affine_rank(&tight, mode.execution)?;
    Ok((max, tight.len(), rank))
}

/// Maximum, tight set and affine rank for every template at size `n`; the
/// right-hand side of each candidate is its observed maximum.
pub fn facet_scan(num_fixed: usize, n: usize, mode: &Exhaustive) -> Result<ScanReport> {
    let templates = enumerate_templates(num_fixed)?;
    let index: BTreeMap<&Template, usize> = templates.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let inner = Exhaustive {
        execution: Execution::Sequential,
        ..*mode
    };
    let results = exec::map(mode.execution, &templates, |t| scan_one(t, n, &inner));
    let full = pair_count(n);
    let mut rows = Vec::with_capacity(templates.len());
    for (k, (t, res)) in templates.iter().zip(results).enumerate() {
        let (max, tight, rank) = res?;
        let orbit = [t.swapped(), t.transposed(), t.swapped().transposed()];
        let rep = orbit
            .iter()
            .filter_map(|o| index.get(o).copied())
            .chain([k])
            .min();
        rows.push(ScanRow {
            index: Some(k),
            template: t.clone(),
            featured: t.featured_class(),
            max_lhs: max,
            tight_count: tight,
            affine_rank: rank,
            is_facet: rank == full,
            equivalent_to: rep.filter(|&r| r != k),
        });
    }
    let mut extra = Vec::new();
    if num_fixed == 2 {
        for class in ClassTag::T_CLASSES {
            let t = Template::featured(class)?;
            if t.is_uniform() {
                continue;
            }
            let (max, tight, rank) = scan_one(&t, n, mode)?;
            extra.push(ScanRow {
                index: None,
                template: t,
                featured: Some(class),
                max_lhs: max,
                tight_count: tight,
                affine_rank: rank,
                is_facet: rank == full,
                equivalent_to: None,
            });
        }
    }
    Ok(ScanReport {
        num_fixed,
        n,
        rows,
        extra,
    })
}
