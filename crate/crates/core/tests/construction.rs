use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wopkit::construct::{
    construct, cpt1, cpt2, merge_and_reverse, MoveToFront, MrStatus, NoOuterStep, OuterState, RowTag,
};
use wopkit::error::Result;
use wopkit::exec::Execution;
use wopkit::inequalities::{make_vi, ClassTag};
use wopkit::order::{apply_move, MoveSpec, PreferencePartition, WeakOrder};
use wopkit::verify::{classify_structure, order_affine_rank};

fn part(buckets: &[&[usize]]) -> PreferencePartition {
    PreferencePartition::new(buckets.iter().map(|b| b.to_vec()).collect()).unwrap()
}

/// Affine rank by exact-fraction elimination.
fn fraction_rank(orders: &[WeakOrder]) -> usize {
    let mut m: Vec<Vec<BigRational>> = orders
        .iter()
        .map(|w| {
            w.to_vector()
                .into_iter()
                .chain([1])
                .map(|x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                let pivot_row = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn cases(n: usize) -> Vec<(ClassTag, Vec<usize>)> {
    let mut out = vec![(ClassTag::T1, vec![1]), (ClassTag::T1, vec![n]), (ClassTag::T1, vec![2])];
    for class in [ClassTag::T2_1, ClassTag::T2_2, ClassTag::T2_3, ClassTag::T2_4] {
        out.push((class, vec![1, n]));
        out.push((class, vec![n, 1]));
        out.push((class, vec![2, 3]));
    }
    out
}

#[test]
fn merge_and_reverse_reference_rows() {
    let p0 = part(&[&[1, 2], &[3], &[4], &[5]]);
    let out = merge_and_reverse(&p0, &[1], 4, &mut MoveToFront).unwrap();
    let got: Vec<String> = out.matrix.partitions().iter().map(|p| p.to_string()).collect();
    assert_eq!(
        got,
        [
            "{{1,2,3},{4},{5}}",
            "{{3},{1,2},{4},{5}}",
            "{{3},{1,2,4},{5}}",
            "{{3},{4},{1,2},{5}}",
            "{{3},{4},{1,2,5}}",
            "{{3},{4},{5},{1,2}}",
            "{{1,3,4},{5},{2}}",
            "{{4},{1,3},{5},{2}}",
            "{{4},{1,3,5},{2}}",
            "{{4},{5},{1,3},{2}}",
            "{{1,4,5},{3},{2}}",
            "{{5},{1,4},{3},{2}}",
        ]
    );
    assert_eq!(out.partition.to_string(), "{{1,5},{4},{3},{2}}");
    let empty = merge_and_reverse(&p0, &[1], 0, &mut NoOuterStep).unwrap();
    assert!(empty.matrix.is_empty() && empty.partition == p0);
    assert_eq!(merge_and_reverse(&p0, &[1], 5, &mut NoOuterStep).unwrap().status, MrStatus::Skipped);
}

#[test]
fn cpt1_reference_tail() {
    let x = cpt1(5, 1).unwrap();
    let tail: Vec<String> = x.partitions()[13..].iter().map(|p| p.to_string()).collect();
    assert_eq!(
        tail,
        [
            "{{4},{1,5},{3},{2}}",
            "{{4},{3},{1,5},{2}}",
            "{{4},{3},{2},{1,5}}",
            "{{4},{3},{1,2},{5}}",
            "{{4},{1,3},{2},{5}}",
            "{{1,4},{3},{2},{5}}",
            "{{1,2},{3},{4},{5}}",
        ]
    );
}

#[test]
fn rows_are_tight_and_classified() {
    for n in 4..=8 {
        for (class, fixed) in cases(n) {
            let q = make_vi(class, n, &fixed).unwrap();
            let x = construct(class, n, &fixed).unwrap();
            assert_eq!(x.len(), n * (n - 1));
            for w in x.orders() {
                assert_eq!(q.lhs(&w).unwrap(), q.rhs(), "{class} n={n} {fixed:?} {}", w.to_partition());
                let id = classify_structure(class, &fixed, &w);
                assert!(id.is_some(), "{class} n={n} {}", w.to_partition());
            }
        }
    }
}

#[test]
fn matrices_have_full_rank() {
    for n in 4..=8 {
        for (class, fixed) in cases(n) {
            let x = construct(class, n, &fixed).unwrap();
            let rank = order_affine_rank(&x.orders(), Execution::default()).unwrap();
            // the CPT1 rows are singular at n = 4 (one short of full rank)
            let expected = if class == ClassTag::T1 && n == 4 { 11 } else { n * (n - 1) };
            assert_eq!(rank, expected, "{class} n={n} {fixed:?}");
        }
    }
    let x = cpt2(ClassTag::T2_3, 7, 1, 7).unwrap();
    assert_eq!(fraction_rank(&x.orders()), 42);
}

#[test]
fn mirrored_procedures_are_transposes() {
    for n in 4..=6 {
        let a = cpt2(ClassTag::T2_1, n, 1, n).unwrap().orders();
        let b = cpt2(ClassTag::T2_2, n, 1, n).unwrap().orders();
        assert!(a.iter().zip(&b).all(|(x, y)| x.transpose() == *y));
    }
}

#[test]
fn invalid_requests() {
    assert!(cpt1(3, 1).is_err());
    assert!(cpt2(ClassTag::T2_1, 5, 2, 2).is_err());
    assert!(construct(ClassTag::T2_0, 5, &[1, 2]).is_err());
    assert!(construct(ClassTag::T3(1), 5, &[1, 2, 3]).is_err());
}

/// Random ordered partition of `[n]` with at least two buckets.
fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> PreferencePartition {
    loop {
        let mut alts: Vec<usize> = (1..=n).collect();
        alts.shuffle(rng);
        let mut buckets = vec![vec![alts[0]]];
        for &a in &alts[1..] {
            if rng.gen_bool(0.6) {
                buckets.push(vec![a]);
            } else {
                buckets.last_mut().unwrap().push(a);
            }
        }
        if buckets.len() >= 2 {
            return PreferencePartition::new(buckets).unwrap();
        }
    }
}

#[test]
fn merge_and_reverse_independence_under_random_outer_steps() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..=6);
        let p0 = random_partition(&mut rng, n);
        let p = p0.len();
        // one pinned alternative per bucket; I⁰ is drawn from what is left
        let pinned: Vec<usize> = p0.buckets().iter().map(|b| *b.choose(&mut rng).unwrap()).collect();
        let free: Vec<usize> = (1..=n).filter(|a| !pinned.contains(a)).collect();
        let i0: Vec<usize> = free.choose(&mut rng).map(|&a| vec![a]).unwrap_or_default();
        let p_hat = rng.gen_range(1..=p);

        let mut step_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut outer = |s: &mut OuterState| -> Result<Vec<PreferencePartition>> {
            let movable: Vec<usize> = (1..=n).filter(|a| !pinned.contains(a)).collect();
            let mut recorded = Vec::new();
            for _ in 0..step_rng.gen_range(0..3) {
                let Some(&a) = movable.choose(&mut step_rng) else { break };
                let k = s.partition.bucket_of(a).unwrap() as i32;
                let len = s.partition.len() as i32;
                let q = step_rng.gen_range(1 - k..=len - k);
                if q != 0 {
                    s.partition = apply_move(&s.partition, &MoveSpec::steps([a], q)?)?;
                }
                if step_rng.gen_bool(0.5) {
                    recorded.push(s.partition.clone());
                }
            }
            Ok(recorded)
        };
        let out = merge_and_reverse(&p0, &i0, p_hat, &mut outer).unwrap();
        let mut rows: Vec<WeakOrder> = out
            .matrix
            .rows()
            .iter()
            .filter(|r| matches!(r.tag, RowTag::Merge | RowTag::Reverse))
            .map(|r| r.order)
            .collect();
        let expected: usize = 2 * (1..=p_hat).map(|j| p - j).sum::<usize>();
        assert_eq!(rows.len(), expected, "seed {seed}");
        rows.push(p0.to_characteristic().unwrap());
        let rank = order_affine_rank(&rows, Execution::Sequential).unwrap();
        assert!(rank > p_hat * (p_hat - 1), "seed {seed}: rank {rank} for p_hat {p_hat}");
        assert_eq!(rank, fraction_rank(&rows), "seed {seed}");
    }
}
