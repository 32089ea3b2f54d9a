use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use helixlab_core::catalog::parse_selector;
use helixlab_core::extrinsic::{frames, second_fundamental_form};
use helixlab_core::intrinsic::{ricci, riemann, sol_metric};
use helixlab_core::numerics::{sym_eig, Tolerances};
use helixlab_core::offset::families::sphere_outward;
use helixlab_core::offset::{offset_data, offset_shape_trace_from};
use helixlab_core::trace_lemma::{default_s_grid, lemma_la_decision, random_triple, trace_rational};

fn extrinsic(c: &mut Criterion) {
    let cone = parse_selector("cone:k=2").unwrap();
    let u = [0.7, 0.3];
    c.bench_function("frames/cone", |b| b.iter(|| frames(&cone, black_box(&u)).unwrap()));
    c.bench_function("second_fundamental_form/cone", |b| {
        b.iter(|| second_fundamental_form(&cone, black_box(&u)).unwrap())
    });
}

fn offsets(c: &mut Criterion) {
    let field = sphere_outward(1.0).unwrap();
    let u = [0.9, 0.4];
    c.bench_function("offset_data/sphere", |b| b.iter(|| offset_data(&field, black_box(&u)).unwrap()));
    let data = offset_data(&field, &u).unwrap();
    c.bench_function("offset_trace/sphere", |b| {
        b.iter(|| offset_shape_trace_from(&data, black_box(0.5)).unwrap())
    });
}

fn trace_lemma(c: &mut Criterion) {
    let mut rng = Tolerances::with_seed(1).rng();
    let triple = random_triple(&mut rng, 6);
    let grid = default_s_grid(6);
    c.bench_function("trace_rational/k6", |b| b.iter(|| trace_rational(&triple, black_box(0.13))));
    c.bench_function("lemma_decision/k6", |b| {
        b.iter(|| lemma_la_decision(&triple, &grid, 1e-9).unwrap())
    });
    let s = triple.h().clone();
    c.bench_function("sym_eig/6x6", |b| b.iter(|| sym_eig(black_box(&s)).unwrap()));
}

fn intrinsic(c: &mut Criterion) {
    let sol = sol_metric(1.0);
    let p = [0.2, -0.4, 0.3];
    c.bench_function("riemann/sol", |b| b.iter(|| riemann(&sol, black_box(&p)).unwrap()));
    c.bench_function("ricci/sol", |b| b.iter(|| ricci(&sol, black_box(&p)).unwrap()));
}

criterion_group!(benches, extrinsic, offsets, trace_lemma, intrinsic);
criterion_main!(benches);
