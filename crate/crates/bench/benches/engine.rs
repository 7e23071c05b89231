use std::hint::black_box;

use cartan_gamma::gammawords::word_of_root_system;
use cartan_gamma::specialfn::gamma;
use cartan_gamma::spectra::{gamma_vector, pf_power_iteration};
use cartan_gamma::{build_root_system, BigReal, PrecisionContext};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::Rational64;

fn gamma_eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma");
    for digits in [50u32, 100, 200] {
        let ctx = PrecisionContext::new(digits).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(digits), &ctx, |b, &ctx| {
            b.iter(|| gamma(black_box(Rational64::new(7, 30)), ctx).unwrap())
        });
    }
    group.finish();
}

fn e8_words(c: &mut Criterion) {
    let rs = build_root_system("E8".parse().unwrap());
    let ctx = PrecisionContext::default();
    c.bench_function("e8_words_build", |b| {
        b.iter(|| {
            for i in 1..=8 {
                black_box(word_of_root_system(black_box(&rs), i).unwrap());
            }
        })
    });
    c.bench_function("e8_gamma_vector", |b| b.iter(|| gamma_vector(black_box(&rs), ctx).unwrap()));
}

fn power_iteration(c: &mut Criterion) {
    let ctx = PrecisionContext::default();
    let tol = BigReal::parse("1e-30", ctx).unwrap();
    let mut group = c.benchmark_group("pf_power_iteration");
    for label in ["E8", "B12", "D12"] {
        let rs = build_root_system(label.parse().unwrap());
        group.bench_function(label, |b| b.iter(|| pf_power_iteration(black_box(rs.cartan()), ctx, &tol).unwrap()));
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = gamma_eval, e8_words, power_iteration
}
criterion_main!(benches);
