use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jobclust_bench::{blobs, lcg_series};
use jobclust_core::cluster::{kmeans_fit, silhouette_score, sweep_k};
use jobclust_core::features::{
    evaluate_series, AdfAttr, Feature, FeatureSpec, FftAttr, Param,
};

/// Per-series feature extraction at the lengths node telemetry actually
/// has, split into the cheap bulk and the families that dominate runtime.
fn extraction(c: &mut Criterion) {
    let full = FeatureSpec::expand(&FeatureSpec::full());
    let spectral = [
        (Feature::FftAggregated, Some(Param::Fft(FftAttr::Centroid))),
        (Feature::SpktWelchDensity, Some(Param::Coeff(8))),
    ];
    let unit_root = [(
        Feature::AugmentedDickeyFuller,
        Some(Param::Adf(AdfAttr::Teststat)),
    )];
    let entropy = [(Feature::SampleEntropy, None)];

    let mut group = c.benchmark_group("extraction");
    for n in [100usize, 400, 1000] {
        let x = lcg_series(n, 42);
        group.bench_with_input(BenchmarkId::new("full_catalog", n), &x, |b, x| {
            b.iter(|| evaluate_series(x, &full));
        });
        group.bench_with_input(BenchmarkId::new("sample_entropy", n), &x, |b, x| {
            b.iter(|| evaluate_series(x, &entropy));
        });
        group.bench_with_input(BenchmarkId::new("unit_root", n), &x, |b, x| {
            b.iter(|| evaluate_series(x, &unit_root));
        });
        group.bench_with_input(BenchmarkId::new("spectral", n), &x, |b, x| {
            b.iter(|| evaluate_series(x, &spectral));
        });
    }
    group.finish();
}

/// Clustering on a 200-job, 20-column matrix, the scale the pipeline sees
/// after selection.
fn clustering(c: &mut Criterion) {
    let data = blobs(200, 20, 4, 7);
    let labels = kmeans_fit(&data, 4, 42).expect("fit succeeds").labels;
    c.bench_function("kmeans_fit/k4", |b| {
        b.iter(|| kmeans_fit(&data, 4, 42).expect("fit succeeds"));
    });
    c.bench_function("silhouette/n200", |b| {
        b.iter(|| silhouette_score(&data, &labels).expect("valid labels"));
    });
    c.bench_function("sweep/k2..10", |b| {
        b.iter(|| sweep_k(&data, 2, 10, 42).expect("sweep succeeds"));
    });
}

criterion_group!(benches, extraction, clustering);
criterion_main!(benches);
