use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use ztnet::generators::{generate_pair, random_hsegments, GenParams, Kind};
use ztnet::rectangles::{canonical_segment_tuples_with, intersection_type_census_with};
use ztnet::{AxisRect, BipartiteIntersectionGraph, Exec};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn graph_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph_build");
    for n in [500, 2000] {
        let (a, b) = generate_pair(Kind::RandomDiscs, n, Kind::RandomDiscs, n, &GenParams::default(), 1).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |bench, _| {
                bench.iter(|| BipartiteIntersectionGraph::build_with(black_box(a.clone()), b.clone(), exec))
            });
        }
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("rect_census");
    for n in [500, 2000] {
        let (a, b) = generate_pair(Kind::RandomRects, n, Kind::RandomRects, n, &GenParams::default(), 2).unwrap();
        let a: Vec<AxisRect> = a.iter().map(|o| *o.as_rect().unwrap()).collect();
        let b: Vec<AxisRect> = b.iter().map(|o| *o.as_rect().unwrap()).collect();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |bench, _| {
                bench.iter(|| intersection_type_census_with(black_box(&a), &b, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn canonical_tuples(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_tuples");
    group.sample_size(20);
    for n in [200, 800] {
        let hs = random_hsegments(n, &GenParams::default(), 3).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |bench, _| {
                bench.iter(|| canonical_segment_tuples_with(black_box(&hs), 3, exec))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, graph_build, census, canonical_tuples);
criterion_main!(benches);
