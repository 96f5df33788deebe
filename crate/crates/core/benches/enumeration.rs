use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hypertoric::exact::int;
use hypertoric::fans::{enumerate_chambers, lawrence_configuration};
use hypertoric::polyhedra::PolyhedronSlice;
use hypertoric::{Quiver, Rat};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let seq = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let par = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("1-thread", seq), ("default", par)]
}

fn chambers(c: &mut Criterion) {
    let a = Quiver::k23().boundary_matrix().unwrap();
    let lawrence = lawrence_configuration(&a);
    let mut g = c.benchmark_group("chambers_k23_lawrence");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &lawrence, |b, m| {
            b.iter(|| pool.install(|| enumerate_chambers(m, true).unwrap().len()))
        });
    }
    g.finish();
}

fn bounded(c: &mut Criterion) {
    // K_{3,3}: corank 4, 9 edges
    let edges = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
    let a = Quiver::new(6, edges).unwrap().boundary_matrix().unwrap();
    let theta: Vec<Rat> = [-7, -4, 3, 3, 3]
        .iter()
        .map(|&x| Rat::from_integer(int(x)))
        .collect();
    let mut g = c.benchmark_group("bounded_complex_lawrence");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(name, |b| {
            b.iter(|| {
                pool.install(|| {
                    let s = PolyhedronSlice::lawrence(&a, theta.clone()).unwrap();
                    s.bounded_complex().unwrap().f_vector
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, chambers, bounded);
criterion_main!(benches);
