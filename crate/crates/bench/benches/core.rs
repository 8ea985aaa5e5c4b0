use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stabsim_bench::fixture;
use stabsim_core::concentration::bounds::{training_stability_tail, uniform_stability_tail};
use stabsim_core::learners::train_max_margin;
use stabsim_core::stability::sample_perturbations;
use stabsim_core::{Cost, Distribution, Learner, SamplerConfig};

fn max_margin(c: &mut Criterion) {
    let d = Distribution::separated_discs(1.0, 1.0);
    let mut g = c.benchmark_group("max_margin");
    for m in [10, 30, 50] {
        let s = fixture(&d, m, 7);
        g.bench_with_input(BenchmarkId::from_parameter(m), &s, |b, s| {
            b.iter(|| train_max_margin(black_box(s), 400).unwrap())
        });
    }
    g.finish();
}

fn perturbations(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_perturbations_100_trials");
    g.sample_size(20);
    let cases = [
        ("threshold_midpoint", Learner::ThresholdMidpoint),
        ("radius_nn", Learner::radius_nn_inverse_square()),
        ("finite_language", Learner::FiniteLanguage),
    ];
    for (name, learner) in cases {
        let d = learner.natural_distribution();
        let cfg = SamplerConfig::new(50, 100, 1);
        g.bench_function(name, |b| {
            b.iter(|| sample_perturbations(&learner, &d, &Cost::default(), black_box(&cfg)).unwrap())
        });
    }
    g.finish();
}

fn bounds(c: &mut Criterion) {
    c.bench_function("tail_bounds_1000_taus", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for k in 0..1000 {
                let tau = k as f64 / 1000.0;
                acc += uniform_stability_tail(black_box(0.01), 1.0, 100, tau);
                acc += training_stability_tail(black_box(1.0), 1.0, 100, tau);
            }
            acc
        })
    });
}

criterion_group!(benches, max_margin, perturbations, bounds);
criterion_main!(benches);
