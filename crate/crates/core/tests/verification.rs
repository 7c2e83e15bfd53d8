use num_rational::Ratio;
use wopkit::construct::construct;
use wopkit::enumerate::weak_orders;
use wopkit::exec::Execution;
use wopkit::inequalities::{axiomatic_inequalities, lift, make_vi, ordered_tuples, wo4_catalog, ClassTag};
use wopkit::order::pair_count;
use wopkit::verify::{
    classify_structure, facet_report, order_affine_rank, separate, structure_census, tight_set, Exhaustive,
};

/// Tight points of T2-0 at n = 4 that the structure table does not describe.
const T2_0_N4_UNCLASSIFIED: usize = 21;

#[test]
fn tight_sets_match_structure_tables() {
    let mode = Exhaustive::default();
    for n in 4..=6 {
        let all = weak_orders(n, 9).unwrap();
        for class in ClassTag::T_CLASSES {
            for fixed in ordered_tuples(n, class.fixed_count().unwrap()) {
                let q = make_vi(class, n, &fixed).unwrap();
                let tight = tight_set(&q, &mode).unwrap();
                let classified: Vec<_> = all
                    .iter()
                    .filter(|w| classify_structure(class, &fixed, w).is_some())
                    .copied()
                    .collect();
                // no classified point is ever slack
                assert!(classified.iter().all(|w| q.lhs(w).unwrap() == q.rhs()), "{class} n={n}");
                let unclassified = tight.len() - classified.len();
                if class == ClassTag::T2_0 && n == 4 {
                    assert_eq!((tight.len(), unclassified), (29, T2_0_N4_UNCLASSIFIED));
                } else {
                    assert_eq!(tight, classified, "{class} n={n} {fixed:?}");
                }
            }
        }
    }
}

#[test]
fn census_counts_add_up() {
    let mode = Exhaustive::default();
    let q = make_vi(ClassTag::T2_3, 6, &[2, 5]).unwrap();
    let tight = tight_set(&q, &mode).unwrap();
    let census = structure_census(ClassTag::T2_3, &[2, 5], &tight);
    assert_eq!(census.unclassified, 0);
    assert_eq!(census.counts.values().sum::<usize>(), tight.len());
    assert_eq!(census.counts.len(), 10);
}

#[test]
fn facet_reports() {
    let mode = Exhaustive::default();
    for n in 4..=7 {
        for class in [ClassTag::T1, ClassTag::T2_1, ClassTag::T2_2, ClassTag::T2_3, ClassTag::T2_4] {
            let fixed: Vec<usize> = if class == ClassTag::T1 { vec![1] } else { vec![1, n] };
            let r = facet_report(&make_vi(class, n, &fixed).unwrap(), &mode).unwrap();
            assert!(r.valid && r.is_facet, "{class} n={n}");
            assert_eq!(r.affine_rank, pair_count(n));
        }
    }
    let t2_0: Vec<usize> = (4..=7)
        .map(|n| facet_report(&make_vi(ClassTag::T2_0, n, &[1, 2]).unwrap(), &mode).unwrap().affine_rank)
        .collect();
    assert_eq!(t2_0, [12, 10, 15, 21]);
}

#[test]
fn facets_come_with_constructions() {
    let mode = Exhaustive::default();
    for n in 5..=6 {
        for class in [ClassTag::T1, ClassTag::T2_1, ClassTag::T2_2, ClassTag::T2_3, ClassTag::T2_4] {
            let fixed: Vec<usize> = if class == ClassTag::T1 { vec![2] } else { vec![3, 1] };
            let r = facet_report(&make_vi(class, n, &fixed).unwrap(), &mode).unwrap();
            assert!(r.is_facet);
            let x = construct(class, n, &fixed).unwrap();
            assert_eq!(order_affine_rank(&x.orders(), Execution::default()).unwrap(), pair_count(n));
        }
    }
}

#[test]
fn transpose_covariance() {
    let mode = Exhaustive::default();
    for n in 4..=6 {
        for (a, b) in [(ClassTag::T2_1, ClassTag::T2_2), (ClassTag::T2_3, ClassTag::T2_4)] {
            let ra = facet_report(&make_vi(a, n, &[2, 1]).unwrap(), &mode).unwrap();
            let rb = facet_report(&make_vi(b, n, &[2, 1]).unwrap(), &mode).unwrap();
            assert_eq!(
                (ra.valid, ra.max_lhs, ra.rhs, ra.tight_count, ra.affine_rank, ra.is_facet),
                (rb.valid, rb.max_lhs, rb.rhs, rb.tight_count, rb.affine_rank, rb.is_facet)
            );
            let ca = ra.census.unwrap();
            let cb = rb.census.unwrap();
            assert_eq!(ca.unclassified, cb.unclassified);
            assert_eq!(ca.counts.values().collect::<Vec<_>>(), cb.counts.values().collect::<Vec<_>>());
        }
    }
}

#[test]
fn axiomatic_rows_are_facets_at_three() {
    for q in axiomatic_inequalities(3).unwrap() {
        let r = facet_report(&q, &Exhaustive::default()).unwrap();
        assert_eq!(r.affine_rank, 6);
        assert!(r.is_facet);
    }
}

#[test]
fn lifted_catalog_is_facet_defining() {
    for q in wo4_catalog() {
        let r = facet_report(&lift(&q, 5).unwrap(), &Exhaustive::default()).unwrap();
        assert!(r.valid && r.is_facet && r.affine_rank == 20, "{q}");
    }
}

#[test]
fn separation() {
    let families = ClassTag::T_CLASSES;
    for w in weak_orders(4, 9).unwrap().iter() {
        let point: Vec<Ratio<i64>> = w.to_vector().into_iter().map(|x| Ratio::from_integer(x as i64)).collect();
        assert!(separate(&point, 4, &families).unwrap().is_none());
    }
    let zero = vec![Ratio::from_integer(0); 6];
    let v = separate(&zero, 3, &[]).unwrap().unwrap();
    assert_eq!(v.inequality.class(), ClassTag::Ax2);
    assert_eq!(v.amount, Ratio::from_integer(1));
    let half = vec![Ratio::new(1, 2); 12];
    assert!(separate(&half, 4, &families).unwrap().is_none());
    // a point that satisfies every axiomatic row but cuts T1
    let bad = make_vi(ClassTag::T1, 4, &[1]).unwrap();
    let mut found = false;
    for w in weak_orders(4, 9).unwrap().iter().filter(|w| bad.lhs(w).unwrap() == bad.rhs()) {
        for u in weak_orders(4, 9).unwrap().iter().filter(|u| bad.lhs(u).unwrap() == bad.rhs()) {
            let mid: Vec<Ratio<i64>> = w
                .to_vector()
                .iter()
                .zip(u.to_vector())
                .map(|(&a, b)| Ratio::new(a as i64 + b as i64, 2))
                .collect();
            found |= separate(&mid, 4, &families).unwrap().is_some();
        }
    }
    assert!(!found, "midpoints of tight points lie in the polytope");
    assert!(separate(&half, 5, &families).is_err());
}
