//! Most-violated-inequality search for fractional points.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::inequalities::{axiomatic_inequalities, instantiate, ordered_tuples, ClassTag, Inequality, Sense};
use crate::order::{pair_count, pair_index};

/// An inequality and the amount `π·x - π₀` (for `<=` form) by which the point
/// violates it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub inequality: Inequality,
    pub amount: Ratio<i64>,
}

fn violation(q: &Inequality, point: &[Ratio<i64>]) -> Ratio<i64> {
    let lhs: Ratio<i64> = q
        .coeffs()
        .iter()
        .map(|(&(i, j), &c)| point[pair_index(i, j, q.n()).expect("validated")] * c)
        .sum();
    let rhs = Ratio::from_integer(q.rhs());
    match q.sense() {
        Sense::Le => lhs - rhs,
        Sense::Ge => rhs - lhs,
    }
}

/// Scans the axiomatic rows and every instance of the requested T families
/// (fixed tuples in lexicographic order) and returns the most violated one,
/// if any violation is positive. Ties go to the earlier class tag, then the
/// lexicographically smaller fixed tuple.
pub fn separate(point: &[Ratio<i64>], n: usize, families: &[ClassTag]) -> Result<Option<Violation>> {
    if point.len() != pair_count(n) {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, n = {n} needs {}",
            point.len(),
            pair_count(n)
        )));
    }
    let (zero, one) = (Ratio::from_integer(0), Ratio::from_integer(1));
    if point.iter().any(|x| *x < zero || *x > one) {
        return Err(Error::Parameter("point coordinates must lie in [0, 1]".into()));
    }
    let mut families: Vec<ClassTag> = families.to_vec();
    families.sort();
    families.dedup();
    if let Some(bad) = families.iter().find(|c| !c.is_t_class()) {
        return Err(Error::Parameter(format!("{bad} is not a separable family")));
    }

    let mut best: Option<Violation> = None;
    let mut consider = |q: Inequality| {
        let amount = violation(&q, point);
        if amount > zero && best.as_ref().is_none_or(|b| amount > b.amount) {
            best = Some(Violation { inequality: q, amount });
        }
    };
    if n >= 3 {
        for q in axiomatic_inequalities(n)? {
            consider(q);
        }
    }
    for class in families {
        let arity = class.fixed_count().expect("T family");
        let min_n = if matches!(class, ClassTag::T3(_)) { 5 } else { 4 };
        if n < min_n {
            continue;
        }
        for fixed in ordered_tuples(n, arity) {
            consider(instantiate(class, n, &fixed)?);
        }
    }
    Ok(best)
}
