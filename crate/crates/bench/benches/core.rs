use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use raney_core::identities::{GridRange, IdentityId, IdentitySpec};
use raney_core::series::solve_functional_equation;
use raney_core::{enumerate_words, shift_up, verify_identity_on_grid, GradedAlphabet, MultiIndex, WordClassSpec};

fn mi(v: &[i64]) -> MultiIndex {
    MultiIndex::new(v.to_vec()).unwrap()
}

fn enumeration(c: &mut Criterion) {
    let alpha = GradedAlphabet::new(mi(&[1, 2])).unwrap();
    let spec = WordClassSpec::new(14, mi(&[2, 2]));
    c.bench_function("enumerate p=14 z=1,2 k=2,2", |b| {
        b.iter(|| enumerate_words(black_box(&spec), &alpha).unwrap().count())
    });
}

fn shifting(c: &mut Criterion) {
    let alpha = GradedAlphabet::new(mi(&[1, 2])).unwrap();
    let n = mi(&[1, 1]);
    let words: Vec<_> = enumerate_words(&WordClassSpec::with_prefix(16, n, 4), &alpha).unwrap().collect();
    c.bench_function("shift_up on a prefix class of weight 16", |b| {
        b.iter(|| {
            for w in &words {
                black_box(shift_up(black_box(w), 4, &alpha).unwrap());
            }
        })
    });
}

fn grid(c: &mut Criterion) {
    let spec = IdentitySpec {
        range: GridRange { start: 0, end: 40 },
        ..IdentitySpec::new(IdentityId::RaneyMohanty1, mi(&[2, 1]), mi(&[1, 3]))
    };
    c.bench_function("grid raney-mohanty-1 n=2,1", |b| {
        b.iter(|| verify_identity_on_grid(black_box(&spec)).unwrap())
    });
}

fn series(c: &mut Criterion) {
    let z = mi(&[2, 3]);
    c.bench_function("functional equation z=2,3 order 8", |b| {
        b.iter(|| solve_functional_equation(black_box(&z), 8).unwrap())
    });
}

criterion_group!(benches, enumeration, shifting, grid, series);
criterion_main!(benches);
