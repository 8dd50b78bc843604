use std::f64::consts::PI;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use linewatch::filterbank::{directional_features, DirectionalBlockParams};
use linewatch::imaging::to_grayscale;
use linewatch::obbgeom::{iou_matrix, OrientedBox};
use linewatch::vegmetric::{analyze_image, VegParams};
use linewatch::{synth, Exec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PATHS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn boxes(n: usize, seed: u64) -> Vec<OrientedBox> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            OrientedBox::new(
                rng.gen_range(0.0..200.0),
                rng.gen_range(0.0..200.0),
                rng.gen_range(10.0..80.0),
                rng.gen_range(2.0..20.0),
                rng.gen_range(-PI..PI),
            )
        })
        .collect()
}

fn bench_iou(c: &mut Criterion) {
    let (a, b) = (boxes(200, 1), boxes(200, 2));
    let mut g = c.benchmark_group("iou_matrix_200x200");
    for (name, exec) in PATHS {
        g.bench_function(BenchmarkId::from_parameter(name), |bn| {
            bn.iter(|| iou_matrix(black_box(&a), black_box(&b), exec))
        });
    }
    g.finish();
}

fn bench_directional(c: &mut Criterion) {
    let gray = to_grayscale(&synth::line_image(512, 256.0, 256.0, 30.0, 1.5, None));
    let params = DirectionalBlockParams::default();
    let mut g = c.benchmark_group("directional_features_512");
    g.sample_size(20);
    for (name, exec) in PATHS {
        g.bench_function(BenchmarkId::from_parameter(name), |bn| {
            bn.iter(|| directional_features(black_box(&gray), &params, exec))
        });
    }
    g.finish();
}

fn bench_batch(c: &mut Criterion) {
    let scenes: Vec<_> = (0..8).map(|k| synth::paired(k, k % 2 == 0)).collect();
    let params = VegParams::default();
    let mut g = c.benchmark_group("analyze_batch_8");
    g.sample_size(10);
    for (name, exec) in PATHS {
        g.bench_function(BenchmarkId::from_parameter(name), |bn| {
            bn.iter(|| {
                exec.map(&scenes, |s| {
                    analyze_image(&s.image, &[s.line], &params, None).unwrap().metric
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bench_iou, bench_directional, bench_batch);
criterion_main!(benches);
