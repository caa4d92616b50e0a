use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use solvlie::catalog::a5;
use solvlie::liegroup::{multiplication, GroupLaw, SolvGroup};
use solvlie::sampling::{par_map, seq_map, Domain};
use solvlie::scalars::Rational;

fn sce1_law() -> GroupLaw {
    let q = |n: i64| Rational::from_integer(n.into());
    let (_, chain) = a5(q(1), q(2)).adapted_chain().unwrap();
    multiplication(&SolvGroup::new(&chain).unwrap()).unwrap()
}

/// Associativity defect at one triple, the inner loop of the group checks.
fn assoc_defect(law: &GroupLaw, p: &[f64]) -> f64 {
    let (x, rest) = p.split_at(5);
    let (y, z) = rest.split_at(5);
    let left = law.apply(&law.apply(x, y), z);
    let right = law.apply(x, &law.apply(y, z));
    left.iter().zip(&right).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn bench_map(c: &mut Criterion) {
    let law = sce1_law();
    let mut group = c.benchmark_group("associativity");
    for n in [64usize, 512, 4096] {
        let points = Domain::cube(15, 1.0).sample(n, 1);
        group.bench_with_input(BenchmarkId::new("par_map", n), &points, |b, pts| {
            b.iter(|| black_box(par_map(pts, |p| assoc_defect(&law, p))))
        });
        group.bench_with_input(BenchmarkId::new("seq_map", n), &points, |b, pts| {
            b.iter(|| black_box(seq_map(pts, |p| assoc_defect(&law, p))))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("jacobian");
    let points = Domain::cube(10, 1.0).sample(1024, 2);
    group.bench_function("par_map", |b| b.iter(|| black_box(par_map(&points, |p| law.jacobian_y(&p[..5], &p[5..])))));
    group.bench_function("seq_map", |b| b.iter(|| black_box(seq_map(&points, |p| law.jacobian_y(&p[..5], &p[5..])))));
    group.finish();
}

criterion_group!(benches, bench_map);
criterion_main!(benches);
