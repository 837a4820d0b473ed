use std::hint::black_box;

use anisobound_core::lattice::{smith_normal_form, IntMatrix};
use anisobound_core::pairing::{isotropic_subgroup, random_alternating_pairing, AlternatingPairing};
use anisobound_core::quadform::pfister_group_closure;
use anisobound_core::{Field, FieldDescriptor};
use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};

fn snf(c: &mut Criterion) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let rows: Vec<Vec<i64>> = (0..8).map(|_| (0..8).map(|_| rng.gen_range(-50..=50)).collect()).collect();
    let m = IntMatrix::from_rows(&rows);
    c.bench_function("smith_normal_form 8x8", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn isotropic(c: &mut Criterion) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let pairings: Vec<AlternatingPairing> = (0..32).map(|_| random_alternating_pairing(&mut rng, 256)).collect();
    c.bench_function("isotropic_subgroup x32", |b| {
        b.iter(|| pairings.iter().map(|p| isotropic_subgroup(black_box(p)).unwrap().order).max())
    });
}

fn pfister(c: &mut Criterion) {
    let mut g = c.benchmark_group("pfister_group_closure");
    g.sample_size(10);
    for k in [3usize, 4] {
        g.bench_function(format!("k = {k}"), |b| b.iter(|| pfister_group_closure(black_box(k)).unwrap().order()));
    }
    g.finish();
}

fn gcd(c: &mut Criterion) {
    let f = Field::new(&FieldDescriptor::function_field(FieldDescriptor::Rationals, &["x", "y"])).unwrap();
    let (x, y) = (f.var(0), f.var(1));
    let one = f.one();
    let common = &(&(&x * &y) + &one) * &(&x - &y);
    let a = &common * &(&(&x * &x) + &y);
    let b = &common * &(&(&y * &y) - &x);
    let ring = f.ring();
    c.bench_function("mpoly gcd Q[x,y]", |bch| {
        bch.iter(|| ring.gcd(black_box(a.numerator()), black_box(b.numerator())))
    });
}

criterion_group!(benches, snf, isotropic, pfister, gcd);
criterion_main!(benches);
