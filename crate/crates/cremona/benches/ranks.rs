//! Rank-core benchmarks.
//!
//! The elimination kernel is data-parallel when the default `parallel`
//! feature is on and single-threaded otherwise; group names carry the active
//! mode, so running `cargo bench` and then
//! `cargo bench --no-default-features` produces directly comparable
//! baselines for both paths.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::time::Duration;

use cremona::linsys::modrank::certified_kernel;
use cremona::linsys::rows::condition_matrix;
use cremona::linsys::{
    actual_dim, adjoint_system, log_plurigenus, singular_inventory, vanishing_adjoints,
    LinearSystemSpec,
};
use cremona::realize::{realize_family, Family};

fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

fn bench_kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group(format!("kernel/{}", mode()));
    g.measurement_time(Duration::from_secs(10)).sample_size(10);

    // Full-rank certificate: the level (3,3) adjoint conditions of twelve
    // general-position-flavored lines with a nine-fold point. One prime
    // settles it.
    let arr = realize_family(Family::Drop3Nodal, 12, 0).unwrap();
    let inventory = singular_inventory(&arr);
    let spec = adjoint_system(12, &inventory, 3, 3).unwrap();
    let full = condition_matrix(
        spec.degree as usize,
        &spec.points,
        None,
    )
    .unwrap();
    g.bench_function("adjoint-3-3-conditions-d12", |b| {
        b.iter_batched(|| full.clone(), |m| certified_kernel(&m), BatchSize::LargeInput)
    });

    // Kernel reconstruction: the movable degree-15 system with a 15-fold
    // point, whose kernel is 4-dimensional and must be lifted and verified.
    let apex = inventory.iter().find(|(_, k)| *k == 9).unwrap().0.clone();
    let mut points = vec![(apex, 15usize)];
    for (p, k) in &inventory {
        if *k == 2 {
            points.push((p.clone(), 1));
        }
    }
    let movable = condition_matrix(15, &points, None).unwrap();
    g.bench_function("movable-15-15-kernel", |b| {
        b.iter_batched(|| movable.clone(), |m| certified_kernel(&m), BatchSize::LargeInput)
    });
    g.finish();
}

fn bench_pipelines(c: &mut Criterion) {
    let mut g = c.benchmark_group(format!("pipeline/{}", mode()));
    g.measurement_time(Duration::from_secs(15)).sample_size(10);

    let triple = realize_family(Family::Drop2Triple, 12, 0).unwrap();
    g.bench_function("vanishing-adjoints-d12", |b| {
        b.iter(|| vanishing_adjoints(&triple).unwrap())
    });

    let nodal = realize_family(Family::Drop3Nodal, 12, 0).unwrap();
    g.bench_function("plurigenus-p3-d12", |b| {
        b.iter(|| log_plurigenus(&nodal, 3).unwrap())
    });

    let inventory = singular_inventory(&nodal);
    let apex = inventory.iter().find(|(_, k)| *k == 9).unwrap().0.clone();
    let mut points = vec![(apex, 15usize)];
    for (p, k) in &inventory {
        if *k == 2 {
            points.push((p.clone(), 1));
        }
    }
    let spec = LinearSystemSpec::new(15, points).unwrap();
    g.bench_function("movable-part-dimension", |b| {
        b.iter(|| actual_dim(&spec).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_kernel, bench_pipelines);
criterion_main!(benches);
