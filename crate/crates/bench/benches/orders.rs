use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lambda_orders::gen::{nesting_pair, nesting_signature};
use lambda_orders::lambda_order::{compare_using, Algorithm, OrderKind};
use lambda_orders_bench::corpus;

const ALGORITHMS: [Algorithm; 2] = [Algorithm::Naive, Algorithm::Optimized];

fn random_pairs(c: &mut Criterion) {
    for kind in [OrderKind::Kbo, OrderKind::Lpo] {
        let (p, pairs) = corpus(kind, 1, 200);
        let mut group = c.benchmark_group(format!("corpus/{kind}"));
        for algo in ALGORITHMS {
            group.bench_function(algo.to_string(), |b| {
                b.iter(|| {
                    for (t, s) in &pairs {
                        black_box(compare_using(t, s, &p, kind, algo).unwrap());
                    }
                })
            });
        }
        group.finish();
    }
}

fn lpo_nesting(c: &mut Criterion) {
    let p = nesting_signature(OrderKind::Lpo);
    let mut group = c.benchmark_group("nesting/lpo");
    for depth in [2, 4, 6, 8, 14] {
        let (t, s) = nesting_pair(depth);
        for algo in ALGORITHMS {
            // Naive takes seconds per comparison past depth 8.
            if algo == Algorithm::Naive && depth > 8 {
                continue;
            }
            group.bench_with_input(BenchmarkId::new(algo.to_string(), depth), &(&t, &s), |b, (t, s)| {
                b.iter(|| compare_using(t, s, &p, OrderKind::Lpo, algo).unwrap())
            });
        }
    }
    group.finish();
}

fn kbo_nesting(c: &mut Criterion) {
    let p = nesting_signature(OrderKind::Kbo);
    let mut group = c.benchmark_group("nesting/kbo");
    for depth in [16, 64, 256] {
        let (t, s) = nesting_pair(depth);
        for algo in ALGORITHMS {
            group.bench_with_input(BenchmarkId::new(algo.to_string(), depth), &(&t, &s), |b, (t, s)| {
                b.iter(|| compare_using(t, s, &p, OrderKind::Kbo, algo).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, random_pairs, lpo_nesting, kbo_nesting);
criterion_main!(benches);
