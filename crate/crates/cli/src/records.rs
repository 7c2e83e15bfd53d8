//! JSON record and report formats.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use wopkit::discover::{RhsLaw, ScanRow, Verdict};
use wopkit::inequalities::{ClassTag, Inequality, Sense};
use wopkit::order::pair_index;
use wopkit::verify::FacetReport;

pub const INEQ_SCHEMA: &str = "wop-ineq/1";
pub const REPORT_SCHEMA: &str = "wop-report/1";
pub const SCAN_SCHEMA: &str = "wop-scan/1";

/// One inequality, one line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InequalityRecord {
    pub schema: String,
    pub class: String,
    pub n: usize,
    pub fixed: Vec<usize>,
    pub sense: String,
    pub rhs: i64,
    pub coeffs: Vec<(usize, usize, i64)>,
}

impl InequalityRecord {
    pub fn from_inequality(q: &Inequality) -> Self {
        InequalityRecord {
            schema: INEQ_SCHEMA.into(),
            class: q.class().to_string(),
            n: q.n(),
            fixed: q.fixed().to_vec(),
            sense: q.sense().to_string(),
            rhs: q.rhs(),
            coeffs: q.coeffs().iter().map(|(&(i, j), &c)| (i, j, c)).collect(),
        }
    }

    /// Rebuilds the inequality; every failure is a description of what is
    /// wrong with the record.
    pub fn to_inequality(&self) -> Result<Inequality, String> {
        if self.schema != INEQ_SCHEMA {
            return Err(format!("unsupported schema {:?}", self.schema));
        }
        let class: ClassTag = self.class.parse().map_err(|e| format!("{e}"))?;
        let sense = match self.sense.as_str() {
            "<=" => Sense::Le,
            ">=" => Sense::Ge,
            s => return Err(format!("sense must be \"<=\" or \">=\", got {s:?}")),
        };
        if self.n < 2 || self.n > wopkit::order::MAX_N {
            return Err(format!("n = {} outside 2..={}", self.n, wopkit::order::MAX_N));
        }
        if self.fixed.iter().any(|&a| a == 0 || a > self.n) {
            return Err(format!("fixed alternatives {:?} outside 1..={}", self.fixed, self.n));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j, c) in &self.coeffs {
            pair_index(i, j, self.n).map_err(|e| e.to_string())?;
            if c == 0 {
                return Err(format!("zero coefficient on ({i}, {j})"));
            }
            if !seen.insert((i, j)) {
                return Err(format!("pair ({i}, {j}) listed twice"));
            }
        }
        Inequality::tagged(
            class,
            self.n,
            self.fixed.clone(),
            self.coeffs.iter().map(|&(i, j, c)| ((i, j), c)),
            self.rhs,
            sense,
        )
        .map_err(|e| e.to_string())
    }
}

/// Text form with variables `x<i><j>` (`x<i>_<j>` once `n` reaches 10),
/// terms in coordinate order.
pub fn porta_line(q: &Inequality) -> String {
    let name = |i: usize, j: usize| {
        if q.n() >= 10 {
            format!("x{i}_{j}")
        } else {
            format!("x{i}{j}")
        }
    };
    let mut terms: Vec<(usize, String)> = q
        .coeffs()
        .iter()
        .map(|(&(i, j), &c)| {
            let k = pair_index(i, j, q.n()).expect("validated");
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            (k, format!("{}{mag}{}", if c < 0 { '-' } else { '+' }, name(i, j)))
        })
        .collect();
    terms.sort();
    let mut out = String::new();
    for (pos, (_, t)) in terms.iter().enumerate() {
        let (sign, body) = t.split_at(1);
        match (pos, sign) {
            (0, "+") => out.push_str(body),
            (0, _) => out.push_str(t),
            _ => {
                out.push(' ');
                out.push_str(sign);
                out.push(' ');
                out.push_str(body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    format!("{out} {} {}", q.sense(), q.rhs())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub counts: BTreeMap<String, usize>,
    pub unclassified: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub validity_ms: f64,
    pub total_ms: f64,
}

/// Verification outcome for one record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub tool_version: String,
    pub class: String,
    pub n: usize,
    pub fixed: Vec<usize>,
    pub sense: String,
    pub rhs: i64,
    pub valid: bool,
    pub max_lhs: i64,
    pub tight_count: usize,
    pub affine_rank: usize,
    pub full_rank: usize,
    pub is_facet: bool,
    pub enumerated: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub census: Option<CensusRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Timings>,
}

impl RunReport {
    pub fn new(q: &Inequality, r: FacetReport, structures: bool) -> Self {
        RunReport {
            schema: REPORT_SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            class: r.class.to_string(),
            n: r.n,
            fixed: r.fixed,
            sense: q.sense().to_string(),
            rhs: r.rhs,
            valid: r.valid,
            max_lhs: r.max_lhs,
            tight_count: r.tight_count,
            affine_rank: r.affine_rank,
            full_rank: r.n * (r.n - 1),
            is_facet: r.is_facet,
            enumerated: r.enumerated,
            census: r.census.filter(|_| structures).map(|c| CensusRecord {
                counts: c.counts,
                unclassified: c.unclassified,
            }),
            timings: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawRecord {
    pub a: String,
    pub b: String,
    pub c: String,
    pub observed: Vec<(usize, i64)>,
    pub verdict: String,
}

impl From<&RhsLaw> for LawRecord {
    fn from(l: &RhsLaw) -> Self {
        LawRecord {
            a: l.a.to_string(),
            b: l.b.to_string(),
            c: l.c.to_string(),
            observed: l.observed.clone(),
            verdict: match l.verdict {
                Verdict::Confirmed => "confirmed".into(),
                Verdict::Refuted => "refuted".into(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRowRecord {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<usize>,
    pub template: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub featured: Option<String>,
    pub max_lhs: i64,
    pub tight_count: usize,
    pub affine_rank: usize,
    pub is_facet: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub equivalent_to: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rhs_law: Option<LawRecord>,
}

impl ScanRowRecord {
    pub fn new(row: &ScanRow, law: Option<&RhsLaw>) -> Self {
        ScanRowRecord {
            index: row.index,
            template: row.template.to_string(),
            featured: row.featured.map(|c| c.to_string()),
            max_lhs: row.max_lhs,
            tight_count: row.tight_count,
            affine_rank: row.affine_rank,
            is_facet: row.is_facet,
            equivalent_to: row.equivalent_to,
            rhs_law: law.map(LawRecord::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub facet_templates: Vec<usize>,
    pub featured: BTreeMap<String, bool>,
    pub unfeatured_facets: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub schema: String,
    pub tool_version: String,
    pub fixed_count: usize,
    pub n: usize,
    pub rows: Vec<ScanRowRecord>,
    pub extra: Vec<ScanRowRecord>,
    pub summary: ScanSummary,
}

#[cfg(test)]
mod tests {
    use super::*;
    use wopkit::inequalities::make_vi;

    #[test]
    fn record_round_trip() {
        let q = make_vi(ClassTag::T2_3, 5, &[1, 5]).unwrap();
        let rec = InequalityRecord::from_inequality(&q);
        let line = serde_json::to_string(&rec).unwrap();
        let back: InequalityRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, rec);
        let q2 = back.to_inequality().unwrap();
        assert_eq!(q2.coeffs(), q.coeffs());
        assert_eq!((q2.rhs(), q2.class(), q2.fixed()), (q.rhs(), q.class(), q.fixed()));
    }

    #[test]
    fn rejects_bad_records() {
        let q = make_vi(ClassTag::T1, 4, &[1]).unwrap();
        let good = InequalityRecord::from_inequality(&q);
        let mut bad = good.clone();
        bad.coeffs.push((2, 2, 1));
        assert!(bad.to_inequality().is_err());
        let mut bad = good.clone();
        bad.sense = "<".into();
        assert!(bad.to_inequality().is_err());
        let mut bad = good;
        bad.schema = "other".into();
        assert!(bad.to_inequality().is_err());
    }

    #[test]
    fn porta_text() {
        let q = make_vi(ClassTag::T1, 4, &[1]).unwrap();
        assert_eq!(
            porta_line(&q),
            "x12 + x13 + x14 + x21 - x23 - x24 + x31 - x32 - x34 + x41 - x42 - x43 <= 1"
        );
        let q = Inequality::custom(3, [((2, 1), -2)], -1, Sense::Ge).unwrap();
        assert_eq!(porta_line(&q), "-2x21 >= -1");
    }
}
