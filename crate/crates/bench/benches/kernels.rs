use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tomosym::channels::{channel_propagator, depolarizing};
use tomosym::entropy::min_entropy_over_group;
use tomosym::linalg::random::haar_unitary;
use tomosym::linalg::random_density;
use tomosym::reconstruction::{make_grid, reconstruct_operator, DEFAULT_OVERSAMPLE};
use tomosym::simplex::{image_dimension, image_sample};
use tomosym::star::{star_grid, StarKernel};
use tomosym::symbols::{spin_tomogram, unitary_tomogram};
use tomosym::{GroupSpec, HalfInt, RngSeed};

fn spin_round_trip(c: &mut Criterion) {
    let mut g = c.benchmark_group("spin_round_trip");
    for twice_j in [1, 2, 4, 6] {
        let j = HalfInt::from_twice(twice_j);
        let grid = make_grid(j, DEFAULT_OVERSAMPLE).unwrap();
        let frames = grid.frames();
        let rho = random_density(j.multiplicity(), j.multiplicity(), RngSeed(1)).unwrap();
        g.bench_with_input(BenchmarkId::new("tomogram", j), &rho, |b, rho| {
            b.iter(|| spin_tomogram(black_box(rho.matrix()), &frames).unwrap())
        });
        let t = spin_tomogram(rho.matrix(), &frames).unwrap();
        g.bench_with_input(BenchmarkId::new("reconstruct", j), &t, |b, t| {
            b.iter(|| reconstruct_operator(black_box(t), &grid).unwrap())
        });
    }
    g.finish();
}

fn star_product(c: &mut Criterion) {
    let mut g = c.benchmark_group("star");
    g.sample_size(10);
    for twice_j in [1, 2] {
        let j = HalfInt::from_twice(twice_j);
        let grid = star_grid(j).unwrap();
        g.bench_function(BenchmarkId::new("kernel_build", j), |b| b.iter(|| StarKernel::build(black_box(&grid)).unwrap()));
        let kernel = StarKernel::build(&grid).unwrap();
        let frames = grid.frames();
        let d = j.multiplicity();
        let fa = spin_tomogram(random_density(d, d, RngSeed(2)).unwrap().matrix(), &frames).unwrap();
        let fb = spin_tomogram(random_density(d, d, RngSeed(3)).unwrap().matrix(), &frames).unwrap();
        g.bench_function(BenchmarkId::new("compose", j), |b| b.iter(|| kernel.compose(black_box(&fa), &fb).unwrap()));
    }
    g.finish();
}

fn frames_and_channels(c: &mut Criterion) {
    let rho = random_density(4, 4, RngSeed(4)).unwrap().with_dims(vec![2, 2]).unwrap();
    let us: Vec<_> = (0..100).map(|i| haar_unitary(4, RngSeed(i)).unwrap()).collect();
    c.bench_function("unitary_tomogram_100_frames", |b| b.iter(|| unitary_tomogram(black_box(&rho), &us).unwrap()));
    c.bench_function("image_sample_1000", |b| {
        b.iter(|| image_sample(black_box(&rho), &GroupSpec::Full, 1000, RngSeed(5)).unwrap())
    });
    c.bench_function("image_dimension_full", |b| b.iter(|| image_dimension(black_box(&rho), &GroupSpec::Full).unwrap()));
    c.bench_function("min_entropy_200", |b| b.iter(|| min_entropy_over_group(black_box(&rho), 200, RngSeed(6)).unwrap()));
    let grid = make_grid(HalfInt::from_twice(1), DEFAULT_OVERSAMPLE).unwrap();
    let channel = depolarizing(0.3).unwrap();
    c.bench_function("qubit_propagator", |b| b.iter(|| channel_propagator(black_box(&channel), &grid).unwrap()));
}

criterion_group!(benches, spin_round_trip, star_product, frames_and_channels);
criterion_main!(benches);
