use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nilbohr::nilmanifold::UnitriangularElement;
use nilbohr::rational::{q, qi};
use nilbohr::search::{brute_force_thm_a, brute_force_thm_b, SearchRequest};
use nilbohr::toruspoly::RealPolynomialApprox;

fn workers() -> Vec<usize> {
    let max = std::thread::available_parallelism().map_or(4, |n| n.get());
    let mut w = vec![1, 2, max];
    w.dedup();
    w
}

// ε = 0 with irrational-looking data forces a full scan.
fn thm_a(c: &mut Criterion) {
    let n: Vec<u64> = (1..=18).collect();
    let p = RealPolynomialApprox::new(vec![qi(0), q(3363, 2378)]).unwrap();
    let mut group = c.benchmark_group("thm_a_exhaustive_n18_k2");
    group.sample_size(10);
    for w in workers() {
        group.bench_with_input(BenchmarkId::from_parameter(w), &w, |b, &w| {
            b.iter(|| {
                let req = SearchRequest {
                    n: &n,
                    k: 2,
                    eps: qi(0),
                    horizon: 18,
                    workers: w,
                };
                brute_force_thm_a(&p, &req).unwrap()
            })
        });
    }
    group.finish();
}

fn thm_b(c: &mut Criterion) {
    let n: Vec<u64> = (1..=13).collect();
    let g = UnitriangularElement::heisenberg(q(3363, 2378), q(1393, 985), q(1, 7));
    let mut group = c.benchmark_group("thm_b_exhaustive_n13_k3");
    group.sample_size(10);
    for w in workers() {
        group.bench_with_input(BenchmarkId::from_parameter(w), &w, |b, &w| {
            b.iter(|| {
                let req = SearchRequest {
                    n: &n,
                    k: 3,
                    eps: qi(0),
                    horizon: 13,
                    workers: w,
                };
                brute_force_thm_b(&g, &req).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, thm_a, thm_b);
criterion_main!(benches);
