use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wopkit::discover::facet_scan;
use wopkit::enumerate::weak_orders;
use wopkit::exec::Execution;
use wopkit::inequalities::{make_vi, ClassTag};
use wopkit::verify::{check_validity, order_affine_rank, tight_set, Exhaustive};

fn modes() -> Vec<(&'static str, Execution)> {
    let mut m = vec![("sequential", Execution::Sequential)];
    #[cfg(feature = "parallel")]
    m.push(("parallel", Execution::Parallel));
    m
}

fn mode(execution: Execution) -> Exhaustive {
    Exhaustive { execution, ..Exhaustive::default() }
}

fn validity(c: &mut Criterion) {
    let q = make_vi(ClassTag::T2_3, 7, &[1, 7]).unwrap();
    weak_orders(7, 7).unwrap();
    let mut g = c.benchmark_group("validity_n7");
    for (name, exec) in modes() {
        g.bench_function(name, |b| b.iter(|| check_validity(&q, &mode(exec)).unwrap()));
    }
    g.finish();
}

fn rank(c: &mut Criterion) {
    let q = make_vi(ClassTag::T1, 7, &[1]).unwrap();
    let tight = tight_set(&q, &Exhaustive::default()).unwrap();
    let mut g = c.benchmark_group("tight_rank_n7");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::new(name, tight.len()), &tight, |b, t| {
            b.iter(|| order_affine_rank(t, exec).unwrap())
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    weak_orders(5, 7).unwrap();
    let mut g = c.benchmark_group("facet_scan_2_fixed_n5");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_function(name, |b| b.iter(|| facet_scan(2, 5, &mode(exec)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, validity, rank, scan);
criterion_main!(benches);
