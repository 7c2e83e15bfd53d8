//! The merge-and-reverse shell with pluggable outer steps, and the
//! construction procedures that emit `n(n-1)` tight characteristic vectors for
//! T1 and T2-1..T2-4.

use std::fmt;

use crate::error::{Error, Result};
use crate::inequalities::ClassTag;
use crate::order::{apply_move, MoveSpec, PreferencePartition, WeakOrder};

/// Why a row was appended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowTag {
    Merge,
    Reverse,
    Outer,
    /// A row appended by the procedure itself rather than by the shell.
    Seed,
}

impl fmt::Display for RowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowTag::Merge => "merge",
            RowTag::Reverse => "reverse",
            RowTag::Outer => "outer",
            RowTag::Seed => "seed",
        })
    }
}

/// One recorded alternative-ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub partition: PreferencePartition,
    pub order: WeakOrder,
    pub tag: RowTag,
}

/// Ordered characteristic vectors with per-row provenance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VectorMatrix {
    n: usize,
    rows: Vec<Row>,
}

impl VectorMatrix {
    pub fn new(n: usize) -> Self {
        VectorMatrix { n, rows: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn orders(&self) -> Vec<WeakOrder> {
        self.rows.iter().map(|r| r.order).collect()
    }

    pub fn partitions(&self) -> Vec<&PreferencePartition> {
        self.rows.iter().map(|r| &r.partition).collect()
    }

    /// Rows as 0/1 vectors in coordinate order.
    pub fn to_vectors(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|r| r.order.to_vector()).collect()
    }

    pub fn push(&mut self, partition: PreferencePartition, tag: RowTag) -> Result<()> {
        if partition.n() != self.n {
            return Err(Error::Dimension(format!(
                "row on {} alternatives pushed to a matrix for n = {}",
                partition.n(),
                self.n
            )));
        }
        let order = partition.to_characteristic()?;
        self.rows.push(Row {
            partition,
            order,
            tag,
        });
        Ok(())
    }

    pub fn extend(&mut self, other: VectorMatrix) {
        self.rows.extend(other.rows);
    }

    /// Every row reversed (the transposed weak orders).
    pub fn transposed(&self) -> VectorMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| Row {
                partition: r.partition.reversed(),
                order: r.order.transpose(),
                tag: r.tag,
            })
            .collect();
        VectorMatrix { n: self.n, rows }
    }

    /// Renames alternative `a` to `labels[a - 1]` in every row.
    pub fn relabeled(&self, labels: &[usize]) -> Result<VectorMatrix> {
        let mut out = VectorMatrix::new(self.n);
        for r in &self.rows {
            out.push(r.partition.relabel(labels)?, r.tag)?;
        }
        Ok(out)
    }
}

/// Working state handed to an outer step.
#[derive(Clone, Debug)]
pub struct OuterState {
    /// Outer iteration, 1-based.
    pub j: usize,
    /// Bucket count of the shell's input partition.
    pub p: usize,
    pub i0: Vec<usize>,
    pub partition: PreferencePartition,
}

/// Runs after each inner loop of the shell; may rewrite the working
/// partition and returns the partitions to record.
pub trait OuterStep {
    fn step(&mut self, state: &mut OuterState) -> Result<Vec<PreferencePartition>>;
}

impl<F> OuterStep for F
where
    F: FnMut(&mut OuterState) -> Result<Vec<PreferencePartition>>,
{
    fn step(&mut self, state: &mut OuterState) -> Result<Vec<PreferencePartition>> {
        self(state)
    }
}

/// Does nothing.
pub struct NoOuterStep;

impl OuterStep for NoOuterStep {
    fn step(&mut self, _: &mut OuterState) -> Result<Vec<PreferencePartition>> {
        Ok(Vec::new())
    }
}

/// `⟨I⁰, j - p⟩`: moves `I⁰` to the front bucket, records nothing.
pub struct MoveToFront;

impl OuterStep for MoveToFront {
    fn step(&mut self, s: &mut OuterState) -> Result<Vec<PreferencePartition>> {
        s.partition = move_by(&s.partition, &s.i0, 2 * (s.j as i32 - s.p as i32))?;
        Ok(Vec::new())
    }
}

/// `⟨i2, 3/2⟩`, then `⟨I⁰, j - p⟩`, then record.
pub struct ShiftAndFront {
    pub i2: usize,
}

impl OuterStep for ShiftAndFront {
    fn step(&mut self, s: &mut OuterState) -> Result<Vec<PreferencePartition>> {
        let shifted = move_by(&s.partition, &[self.i2], 3)?;
        s.partition = move_by(&shifted, &s.i0, 2 * (s.j as i32 - s.p as i32))?;
        Ok(vec![s.partition.clone()])
    }
}

/// A move where zero steps leaves the partition unchanged.
fn move_by(p: &PreferencePartition, items: &[usize], half_steps: i32) -> Result<PreferencePartition> {
    if half_steps == 0 {
        return Ok(p.clone());
    }
    apply_move(p, &MoveSpec::new(items.iter().copied(), half_steps)?)
}

fn move_bucket(p: &PreferencePartition, k: usize, half_steps: i32) -> Result<PreferencePartition> {
    if k == 0 || k > p.len() {
        return Err(Error::InvalidMove(format!("bucket {k} of {}", p.len())));
    }
    move_by(p, p.bucket(k), half_steps)
}

/// Whether the shell ran.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MrStatus {
    Completed,
    /// `p_hat` exceeded the bucket count, nothing was generated.
    Skipped,
}

#[derive(Clone, Debug)]
pub struct MrOutput {
    pub matrix: VectorMatrix,
    pub partition: PreferencePartition,
    pub status: MrStatus,
}

/// The merge-and-reverse shell.
///
/// For `j = 1..=p_hat` the first bucket becomes `I¹`; for `k = 1..=p-j` it is
/// merged one bucket forward and recorded, then split off half a bucket
/// forward and recorded; `step` runs after each inner loop.
pub fn merge_and_reverse(
    p0: &PreferencePartition,
    i0: &[usize],
    p_hat: usize,
    step: &mut dyn OuterStep,
) -> Result<MrOutput> {
    let n = p0.n();
    let p = p0.len();
    let mut matrix = VectorMatrix::new(n);
    if p_hat > p {
        return Ok(MrOutput {
            matrix,
            partition: p0.clone(),
            status: MrStatus::Skipped,
        });
    }
    let mut current = p0.clone();
    for j in 1..=p_hat {
        let i1 = current.bucket(1).to_vec();
        for _ in 1..=p - j {
            current = move_by(&current, &i1, 2)?;
            matrix.push(current.clone(), RowTag::Merge)?;
            current = move_by(&current, &i1, 1)?;
            matrix.push(current.clone(), RowTag::Reverse)?;
        }
        let mut state = OuterState {
            j,
            p,
            i0: i0.to_vec(),
            partition: current,
        };
        for rec in step.step(&mut state)? {
            matrix.push(rec, RowTag::Outer)?;
        }
        current = state.partition;
    }
    Ok(MrOutput {
        matrix,
        partition: current,
        status: MrStatus::Completed,
    })
}

/// Label map sending internal alternative `a` to `labels[a - 1]`: internal
/// `1` and (optionally) `n` become the fixed alternatives, the rest keep
/// ascending order.
fn fixed_labels(n: usize, i1: usize, i2: Option<usize>) -> Vec<usize> {
    let mut rest = (1..=n).filter(|&a| a != i1 && Some(a) != i2);
    let mut labels = Vec::with_capacity(n);
    labels.push(i1);
    let inner = if i2.is_some() { n - 2 } else { n - 1 };
    labels.extend(rest.by_ref().take(inner));
    if let Some(i2) = i2 {
        labels.push(i2);
    }
    labels
}

fn check_size(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::Dimension(format!("construction needs n >= 4, got {n}")));
    }
    if n > crate::order::MAX_N {
        return Err(Error::Dimension(format!("n = {n} exceeds {}", crate::order::MAX_N)));
    }
    Ok(())
}

fn check_rows(m: &VectorMatrix) -> Result<()> {
    let n = m.n();
    if m.len() != n * (n - 1) {
        return Err(Error::Invariant(format!(
            "construction emitted {} rows, expected {}",
            m.len(),
            n * (n - 1)
        )));
    }
    Ok(())
}

/// Tight vectors for T1 with fixed alternative `i1`.
pub fn cpt1(n: usize, i1: usize) -> Result<VectorMatrix> {
    check_size(n)?;
    if i1 == 0 || i1 > n {
        return Err(Error::Parameter(format!("i1 = {i1} outside 1..={n}")));
    }
    let mut buckets = vec![vec![1, 2]];
    buckets.extend((3..=n).map(|a| vec![a]));
    let p0 = PreferencePartition::new(buckets)?;
    let p = p0.len();

    let mr = merge_and_reverse(&p0, &[1], p, &mut MoveToFront)?;
    let mut x = mr.matrix;
    let mut p1 = mr.partition;
    x.push(p1.clone(), RowTag::Seed)?;
    for j in 1..p {
        p1 = move_bucket(&p1, j, 3)?;
        x.push(p1.clone(), RowTag::Seed)?;
    }
    for _ in 1..p {
        p1 = move_by(&p1, &[1], -2)?;
        x.push(p1.clone(), RowTag::Seed)?;
    }
    x.push(p0, RowTag::Seed)?;
    check_rows(&x)?;
    x.relabeled(&fixed_labels(n, i1, None))
}

/// Tight vectors for T2-1, T2-2, T2-3 or T2-4 with fixed `(i1, i2)`.
pub fn cpt2(variant: ClassTag, n: usize, i1: usize, i2: usize) -> Result<VectorMatrix> {
    check_size(n)?;
    if i1 == i2 || i1 == 0 || i2 == 0 || i1 > n || i2 > n {
        return Err(Error::Parameter(format!(
            "fixed alternatives ({i1}, {i2}) must be distinct members of 1..={n}"
        )));
    }
    let internal = match variant {
        ClassTag::T2_1 => cpt2_internal(n, false)?,
        ClassTag::T2_3 => cpt2_internal(n, true)?,
        ClassTag::T2_2 => cpt2_internal(n, false)?.transposed(),
        ClassTag::T2_4 => cpt2_internal(n, true)?.transposed(),
        other => {
            return Err(Error::Parameter(format!("no construction procedure for {other}")))
        }
    };
    check_rows(&internal)?;
    internal.relabeled(&fixed_labels(n, i1, Some(i2)))
}

/// Internal labels: `i1 = 1`, `i2 = n`, `j_k = k + 1`.
fn cpt2_internal(n: usize, modified: bool) -> Result<VectorMatrix> {
    let (i1, i2) = (1, n);
    let j = |k: usize| k + 1;
    let mut buckets = vec![vec![i1], vec![i2]];
    buckets.extend((1..=n - 4).map(|k| vec![j(k)]));
    buckets.push(vec![j(n - 2)]);
    buckets.push(vec![j(n - 3)]);
    let mut p0 = PreferencePartition::new(buckets)?;
    let mut x = VectorMatrix::new(n);
    x.push(p0.clone(), RowTag::Seed)?;
    p0 = move_bucket(&p0, n, -3)?;
    x.push(p0.clone(), RowTag::Seed)?;
    if modified {
        p0 = move_by(&p0, &[i2], 2)?;
        x.push(p0.clone(), RowTag::Seed)?;
        p0 = move_by(&p0, &[i2], 1)?;
        p0 = move_by(&p0, &[i1], 2)?;
        x.push(p0.clone(), RowTag::Seed)?;
    } else {
        p0 = move_by(&p0, &[i1], 2)?;
        x.push(p0.clone(), RowTag::Seed)?;
        p0 = move_bucket(&p0, 1, 2)?;
        p0 = move_by(&p0, &[i2], 1)?;
        x.push(p0.clone(), RowTag::Seed)?;
    }
    let p = p0.len();
    let mr = merge_and_reverse(&p0, &[i1], p - 2, &mut ShiftAndFront { i2 })?;
    x.extend(mr.matrix);
    let mut p1 = mr.partition;
    p1 = move_by(&p1, &[i2], -2)?;
    x.push(p1.clone(), RowTag::Seed)?;
    p1 = move_by(&p1, &[i2], 1)?;
    for k in 1..p {
        p1 = move_bucket(&p1, k, 3)?;
        x.push(p1.clone(), RowTag::Seed)?;
    }
    Ok(x)
}

/// Dispatches on the class tag.
pub fn construct(class: ClassTag, n: usize, fixed: &[usize]) -> Result<VectorMatrix> {
    match (class, fixed) {
        (ClassTag::T1, &[i1]) => cpt1(n, i1),
        (ClassTag::T2_1 | ClassTag::T2_2 | ClassTag::T2_3 | ClassTag::T2_4, &[i1, i2]) => {
            cpt2(class, n, i1, i2)
        }
        (ClassTag::T1 | ClassTag::T2_1 | ClassTag::T2_2 | ClassTag::T2_3 | ClassTag::T2_4, _) => {
            Err(Error::Parameter(format!("wrong number of fixed alternatives for {class}")))
        }
        (other, _) => Err(Error::Parameter(format!("no construction procedure for {other}"))),
    }
}
