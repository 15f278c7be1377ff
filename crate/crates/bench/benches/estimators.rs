use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use robustmr::median_methods::{weighted_median_estimate, BootstrapConfig};
use robustmr::robust_mm::mm_regress;
use robustmr::simulation::{generate_study, ScenarioSpec};
use robustmr::wls::{egger, ivw};
use robustmr::{BisquareParams, EffectsModel, SummarySet, WeightVector};

fn study_set(j: usize) -> SummarySet {
    let spec = ScenarioSpec {
        j,
        seed: 5,
        ..ScenarioSpec::new(2, 0.3, 0.1).unwrap()
    };
    generate_study(&spec, 0).unwrap().0.summary.harmonize()
}

fn regression(c: &mut Criterion) {
    let mut group = c.benchmark_group("regression");
    for j in [10, 25, 100] {
        let set = study_set(j);
        let w = WeightVector::inverse_variance(&set);
        group.bench_with_input(BenchmarkId::new("ivw", j), &set, |b, s| b.iter(|| ivw(s, &w, EffectsModel::MultiplicativeRandom).unwrap()));
        group.bench_with_input(BenchmarkId::new("egger", j), &set, |b, s| b.iter(|| egger(s, &w).unwrap()));
        group.bench_with_input(BenchmarkId::new("mm-no-intercept", j), &set, |b, s| {
            b.iter(|| mm_regress(s, &w, false, &BisquareParams::default(), EffectsModel::MultiplicativeRandom, 1).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("mm-intercept", j), &set, |b, s| {
            b.iter(|| mm_regress(s, &w, true, &BisquareParams::default(), EffectsModel::MultiplicativeRandom, 1).unwrap())
        });
    }
    group.finish();
}

fn median(c: &mut Criterion) {
    let set = study_set(25);
    let cfg = BootstrapConfig { draws: 1000, seed: 3 };
    c.bench_function("weighted-median-bootstrap-1000", |b| b.iter(|| weighted_median_estimate(&set, &cfg).unwrap()));
}

criterion_group!(benches, regression, median);
criterion_main!(benches);
