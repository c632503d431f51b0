use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wkl_core::verify::check_selfduality;
use wkl_core::{
    compute_whittaker_kl, AntisphericalModule, CartanDatum, KlOptions, ParabolicQuotient, Parallelism, ThetaSubset,
    WeylGroup,
};

fn quotient(t: &str, theta: &str) -> Arc<ParabolicQuotient> {
    let g = Arc::new(WeylGroup::enumerate(&CartanDatum::new(t.parse().unwrap())).unwrap());
    let theta = ThetaSubset::parse(theta, g.rank()).unwrap();
    Arc::new(ParabolicQuotient::new(g, theta))
}

const CASES: &[(&str, &str)] = &[("B3", "none"), ("D4", "2"), ("F4", "1,2")];
const MODES: &[(&str, Parallelism)] = &[("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn recursion(c: &mut Criterion) {
    let mut group = c.benchmark_group("whittaker_recursion");
    group.sample_size(10);
    for &(t, theta) in CASES {
        let q = quotient(t, theta);
        for &(name, parallelism) in MODES {
            let options = KlOptions {
                parallelism,
                ..KlOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(name, format!("{t}-{theta}")), &q, |b, q| {
                b.iter(|| compute_whittaker_kl(q, options).unwrap())
            });
        }
    }
    group.finish();
}

fn selfduality(c: &mut Criterion) {
    let mut group = c.benchmark_group("selfduality_check");
    group.sample_size(10);
    for &(t, theta) in CASES {
        let q = quotient(t, theta);
        let table = compute_whittaker_kl(&q, KlOptions::default()).unwrap();
        for &(name, mode) in MODES {
            group.bench_function(BenchmarkId::new(name, format!("{t}-{theta}")), |b| {
                // fresh module so the bar memo is part of the measured work
                b.iter(|| check_selfduality(&table, &AntisphericalModule::new(q.clone()), mode))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, recursion, selfduality);
criterion_main!(benches);
