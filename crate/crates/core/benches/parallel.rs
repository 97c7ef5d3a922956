use std::hint::black_box;

use aqml_core::datasets::separable_blobs;
use aqml_core::embed::{EmbeddingKind, LayerKind, Registry, Task};
use aqml_core::exec::Exec;
use aqml_core::finder::{find_model, FinderConfig};
use aqml_core::models::{init_weights, training_kernel, FeatureMap, FitOptions, QnnClassifier};
use aqml_core::qsim::{CallCounter, CircuitSpec};
use aqml_core::train::BudgetLedger;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn kernel(c: &mut Criterion) {
    let circuit = CircuitSpec::new(4, EmbeddingKind::angle(), vec![LayerKind::strongly_entangling(); 3])
        .unwrap()
        .with_reupload(true);
    let weights = init_weights(circuit.param_count(), 0);
    let x: Vec<Vec<f64>> = (0..24)
        .map(|i| (0..4).map(|j| ((i * 7 + j) as f64).sin()).collect())
        .collect();
    let mut group = c.benchmark_group("training_kernel_24pts_4wires");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let map = FeatureMap {
                    circuit: &circuit,
                    weights: &weights,
                };
                training_kernel(map, black_box(&x), &CallCounter::new(), exec).unwrap()
            })
        });
    }
    group.finish();
}

fn qnn_epoch(c: &mut Criterion) {
    let data = separable_blobs(40, 0);
    let circuit = CircuitSpec::new(2, EmbeddingKind::angle(), vec![LayerKind::strongly_entangling(); 3]).unwrap();
    let mut group = c.benchmark_group("qnn_one_epoch_40pts");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let mut model = QnnClassifier::new(circuit.clone(), 20, 2.0, 1, 0);
                let opts = FitOptions {
                    exec,
                    ..FitOptions::default()
                };
                model.fit(black_box(&data), &opts, &BudgetLedger::new()).unwrap()
            })
        });
    }
    group.finish();
}

fn study(c: &mut Criterion) {
    let data = separable_blobs(30, 0);
    let registry = Registry::builtin();
    let mut group = c.benchmark_group("study_8_trials");
    group.sample_size(10);
    for (name, exec, cores) in [("sequential", Exec::Sequential, 1), ("parallel", Exec::Parallel, 4)] {
        let config = FinderConfig {
            n_trials: 8,
            n_seeds: 2,
            n_epochs: 3,
            n_cores: cores,
            exec,
            ..FinderConfig::new(Task::Classification)
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| find_model(&config, &registry, black_box(&data), None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, kernel, qnn_epoch, study);
criterion_main!(benches);
