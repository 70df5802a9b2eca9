use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use superchsh::check::{random_supernumber, rng};
use superchsh::{outcome_tables, GameParameters, MapKind};

fn supernumber_mul(c: &mut Criterion) {
    let mut r = rng(1);
    let (a, b) = (random_supernumber(&mut r), random_supernumber(&mut r));
    c.bench_function("supernumber_mul_dense", |bch| bch.iter(|| black_box(a) * black_box(b)));
    c.bench_function("supernumber_involution", |bch| bch.iter(|| black_box(a).involution()));
}

fn game_tables(c: &mut Criterion) {
    let params = GameParameters::paper();
    c.bench_function("outcome_tables_rogers", |b| {
        b.iter(|| outcome_tables(black_box(&params), MapKind::ModifiedRogers).unwrap())
    });
}

criterion_group!(benches, supernumber_mul, game_tables);
criterion_main!(benches);
