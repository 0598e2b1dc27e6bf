use criterion::{criterion_group, criterion_main, Criterion};
use crescent_core::{
    apex_extend, base_config, circumradius_sq, cm_det, concyclic, figure1_lattice_points,
    spectrum, to_exact_config, verify_crescent, ApexChoice, LatticePoint, Rational,
};
use std::hint::black_box;

fn bench_predicates(c: &mut Criterion) {
    let fig = figure1_lattice_points();
    let config = to_exact_config(&fig).unwrap();
    let all: Vec<usize> = (0..config.n()).collect();

    c.bench_function("cm_det_8_points", |b| {
        b.iter(|| cm_det(black_box(&config), black_box(&all)).unwrap())
    });

    c.bench_function("circumradius_7_point_simplex", |b| {
        // An affinely independent 7-point chain in R^6.
        let one = Rational::from_integer(1.into());
        let half = Rational::new(1.into(), 2.into());
        let mut simplex = base_config(&one, &half).unwrap();
        for _ in 0..4 {
            simplex = apex_extend(&simplex, &ApexChoice { delta: one.clone() }).unwrap();
        }
        b.iter(|| circumradius_sq(black_box(&simplex)).unwrap())
    });

    c.bench_function("verify_crescent_figure1", |b| {
        b.iter(|| verify_crescent(black_box(&config)).is_ok())
    });

    c.bench_function("spectrum_figure1", |b| {
        b.iter(|| spectrum(black_box(&config)))
    });

    c.bench_function("concyclic_integer_quadruple", |b| {
        let q = [
            LatticePoint::new(0, 0),
            LatticePoint::new(3, 1),
            LatticePoint::new(-2, 4),
            LatticePoint::new(1, -5),
        ];
        b.iter(|| concyclic(black_box(q[0]), black_box(q[1]), black_box(q[2]), black_box(q[3])))
    });
}

criterion_group!(benches, bench_predicates);
criterion_main!(benches);
