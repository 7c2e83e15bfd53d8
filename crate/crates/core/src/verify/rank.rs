//! Exact affine rank of 0/1 point sets by fraction-free integer elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};

/// Rows are reduced in chunks; each chunk is eliminated independently and
/// the partial bases are merged.
const CHUNK: usize = 512;

/// Integer row-echelon basis. Every stored row has a distinct pivot column
/// and its content divided out.
#[derive(Clone, Debug, Default)]
struct Echelon {
    width: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
        }
    }

    fn full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Eliminates `v` against the basis without fractions:
    /// `v <- b[p]·v - v[p]·b`, then strips the gcd. Keeps the remainder if
    /// it is nonzero.
    fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        if self.full() {
            return false;
        }
        for (pivot, b) in &self.rows {
            let vp = &v[*pivot];
            if vp.is_zero() {
                continue;
            }
            let (bp, vp) = (b[*pivot].clone(), vp.clone());
            for (x, y) in v.iter_mut().zip(b) {
                *x = &bp * &*x - &vp * y;
            }
            normalize(&mut v);
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }

    fn merge(mut self, other: Echelon) -> Echelon {
        for (_, row) in other.rows {
            if self.full() {
                break;
            }
            self.insert(row);
        }
        self
    }
}

fn normalize(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

fn check_shape<T>(rows: &[Vec<T>]) -> Result<usize> {
    let first = rows.first().ok_or(Error::Empty("affine rank of an empty point set"))?;
    let width = first.len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Dimension("rows of unequal length".into()));
    }
    Ok(width)
}

/// Rank over the rationals of an integer matrix.
pub fn linear_rank(rows: &[Vec<i64>], exec: Execution) -> Result<usize> {
    let width = check_shape(rows)?;
    Ok(reduce(rows, width, exec, |r| r.iter().map(|&x| BigInt::from(x)).collect()))
}

/// Rank of the points with a ones-column appended: the number of affinely
/// independent points among them.
pub fn affine_rank<P: AsRef<[u8]> + Sync>(points: &[P], exec: Execution) -> Result<usize> {
    let first = points
        .first()
        .ok_or(Error::Empty("affine rank of an empty point set"))?;
    let width = first.as_ref().len();
    if points.iter().any(|p| p.as_ref().len() != width) {
        return Err(Error::Dimension("points of unequal length".into()));
    }
    Ok(reduce(points, width + 1, exec, |p| {
        let mut row: Vec<BigInt> = p.as_ref().iter().map(|&x| BigInt::from(x)).collect();
        row.push(BigInt::one());
        row
    }))
}

fn reduce<T: Sync, F>(rows: &[T], width: usize, exec: Execution, to_row: F) -> usize
where
    F: Fn(&T) -> Vec<BigInt> + Sync + Send,
{
    let chunks: Vec<&[T]> = rows.chunks(CHUNK).collect();
    let partial = exec::map(exec, &chunks, |chunk| {
        let mut e = Echelon::new(width);
        for r in chunk.iter() {
            if e.full() {
                break;
            }
            e.insert(to_row(r));
        }
        e
    });
    partial
        .into_iter()
        .reduce(Echelon::merge)
        .map_or(0, |e| e.rows.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    /// Independent oracle: Gauss-Jordan over exact fractions.
    fn rational_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][c].clone();
            for x in m[rank].iter_mut() {
                *x = &*x / &pivot;
            }
            let pivot_row = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x -= &f * p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn trivial_cases() {
        let one = vec![vec![1u8, 0, 1]];
        assert_eq!(affine_rank(&one, Execution::Sequential).unwrap(), 1);
        let thrice = vec![vec![1u8, 0, 1]; 3];
        assert_eq!(affine_rank(&thrice, Execution::Sequential).unwrap(), 1);
        let empty: Vec<Vec<u8>> = Vec::new();
        assert!(matches!(affine_rank(&empty, Execution::Sequential), Err(Error::Empty(_))));
        assert!(affine_rank(&[vec![1u8], vec![1, 0]], Execution::Sequential).is_err());
    }

    #[test]
    fn affine_versus_linear() {
        // a triangle is affinely independent; points on a line through 0 are not
        let pts = vec![vec![0u8, 0], vec![1, 1], vec![1, 0]];
        assert_eq!(affine_rank(&pts, Execution::Sequential).unwrap(), 3);
        let line = vec![vec![0i64, 0], vec![1, 1], vec![2, 2]];
        assert_eq!(linear_rank(&line, Execution::Sequential).unwrap(), 1);
    }

    #[test]
    fn agrees_with_fraction_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..60 {
            let m = rng.gen_range(1..30);
            let c = rng.gen_range(1..14);
            let rows: Vec<Vec<i64>> = (0..m)
                .map(|_| (0..c).map(|_| rng.gen_range(-3i64..=3) * (trial % 3) as i64).collect())
                .collect();
            assert_eq!(linear_rank(&rows, Execution::Sequential).unwrap(), rational_rank(&rows));
            assert_eq!(linear_rank(&rows, Execution::default()).unwrap(), rational_rank(&rows));
        }
    }

    #[test]
    fn chunk_merge_matches_single_pass() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rows: Vec<Vec<u8>> = (0..1500)
            .map(|_| (0..20).map(|_| u8::from(rng.gen_bool(0.1))).collect())
            .collect();
        let as_i64: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).chain([1]).collect())
            .collect();
        assert_eq!(affine_rank(&rows, Execution::default()).unwrap(), rational_rank(&as_i64));
    }
}
