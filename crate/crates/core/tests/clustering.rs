use aqml_core::data::Dataset;
use aqml_core::datasets::{bars_and_stripes, two_clusters};
use aqml_core::embed::{Registry, Task};
use aqml_core::exec::Exec;
use aqml_core::finder::{compression_bounds, options_for_trial, FinderConfig, ModelOptions, Trial};
use aqml_core::models::{accuracy, silhouette, Rbm, RbmClusterer};
use aqml_core::rng::PortableRng;
use aqml_core::Error;
use nalgebra::DVector;
use proptest::prelude::*;

/// Direct `a(i)`, `b(i)` computation.
fn brute_silhouette(points: &[Vec<f64>], labels: &[u64]) -> f64 {
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let mut total = 0.0;
    for i in 0..points.len() {
        let same: Vec<f64> = (0..points.len())
            .filter(|&j| j != i && labels[j] == labels[i])
            .map(|j| dist(&points[i], &points[j]))
            .collect();
        if same.is_empty() {
            continue;
        }
        let a = same.iter().sum::<f64>() / same.len() as f64;
        let mut others: Vec<u64> = labels.iter().copied().filter(|&l| l != labels[i]).collect();
        others.sort_unstable();
        others.dedup();
        let b = others
            .iter()
            .map(|&c| {
                let d: Vec<f64> = (0..points.len())
                    .filter(|&j| labels[j] == c)
                    .map(|j| dist(&points[i], &points[j]))
                    .collect();
                d.iter().sum::<f64>() / d.len() as f64
            })
            .fold(f64::INFINITY, f64::min);
        total += (b - a) / a.max(b);
    }
    total / points.len() as f64
}

#[test]
fn four_point_hand_case() {
    let pts = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![4.0, 0.0], vec![5.0, 2.0]];
    let labels = [0, 0, 1, 1];
    let s = silhouette(&pts, &labels, Exec::Sequential).unwrap();
    assert!((s - 0.6482306639936364).abs() < 1e-12);
    assert!((s - brute_silhouette(&pts, &labels)).abs() < 1e-12);
    let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0], vec![10.0, 0.0]];
    let s = silhouette(&pts, &[0, 0, 1, 2], Exec::Parallel).unwrap();
    assert!((s - 0.125).abs() < 1e-12);
}

#[test]
fn silhouette_validity_range() {
    let pts: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
    assert!(matches!(
        silhouette(&pts, &[7, 7, 7, 7], Exec::Sequential),
        Err(Error::SilhouetteUndefined {
            n_clusters: 1,
            n_samples: 4
        })
    ));
    assert!(matches!(
        silhouette(&pts, &[0, 1, 2, 3], Exec::Sequential),
        Err(Error::SilhouetteUndefined { n_clusters: 4, .. })
    ));
    assert!(silhouette(&pts, &[0, 1, 2, 2], Exec::Sequential).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scores_are_bounded(seed in any::<u64>(), n in 3usize..14, k in 2u64..4) {
        let mut rng = PortableRng::new(seed);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)]).collect();
        let mut labels: Vec<u64> = (0..n).map(|_| rng.int_inclusive(0, k as i64 - 1) as u64).collect();
        labels[0] = 0;
        labels[1] = 1;
        let distinct = labels.iter().collect::<std::collections::BTreeSet<_>>().len();
        if distinct < n {
            let s = silhouette(&pts, &labels, Exec::Sequential).unwrap();
            prop_assert!((-1.0..=1.0).contains(&s));
            prop_assert!((s - brute_silhouette(&pts, &labels)).abs() < 1e-12);
        }
        let truth: Vec<f64> = (0..n).map(|_| rng.int_inclusive(0, 1) as f64).collect();
        let pred: Vec<f64> = (0..n).map(|_| rng.int_inclusive(0, 1) as f64).collect();
        let acc = accuracy(&pred, &truth).unwrap();
        prop_assert!((0.0..=1.0).contains(&acc));
    }
}

#[test]
fn unsupervised_bounds_over_many_trials() {
    let registry = Registry::builtin();
    let data = Dataset::new(vec![vec![0.5; 16], vec![0.1; 16], vec![0.9; 16]], None).unwrap();
    let config = FinderConfig::new(Task::Clustering);
    assert_eq!(compression_bounds(16), (4, 12));
    for id in 0..1000 {
        let mut trial = Trial::new(id, config.trial_seed(id));
        let ModelOptions::Unsupervised(o) = options_for_trial(&mut trial, &config, &registry, &data).unwrap() else {
            panic!("clustering yields unsupervised options");
        };
        let c = o.lbae_out_channels;
        assert!((4..=12).contains(&c));
        let lo = (c as f64).sqrt().floor() as usize;
        let hi = (0.75 * c as f64).ceil() as usize;
        assert!(
            (lo..=hi).contains(&o.rbm_n_hidden_neurons),
            "C={c}: {}",
            o.rbm_n_hidden_neurons
        );
        assert_eq!(o.rbm_n_visible_neurons, c);
        assert!((1..=3).contains(&o.lbae_n_layers));
        assert!((0.3..=0.7).contains(&o.firing_threshold));
        let keys: Vec<&str> = trial.sampled().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            [
                "model",
                "lbae_out_channels",
                "rbm_n_hidden_neurons",
                "lbae_n_layers",
                "firing_threshold"
            ]
        );
    }
}

#[test]
fn cd1_reduces_reconstruction_error_on_bars_and_stripes() {
    let patterns: Vec<DVector<f64>> = bars_and_stripes(4).into_iter().map(|p| DVector::from_vec(p)).collect();
    assert_eq!(patterns.len(), 30);
    for seed in 0..3 {
        let mut rbm = Rbm::random(16, 8, seed);
        let before = rbm.reconstruction_error(&patterns);
        let mut rng = PortableRng::new(seed);
        for _ in 0..200 {
            rbm.cd1_step(&patterns, 0.1, &mut rng);
        }
        let after = rbm.reconstruction_error(&patterns);
        assert!(after < before, "seed {seed}: {before} -> {after}");
    }
}

#[test]
fn clusterer_separates_two_groups() {
    let data = two_clusters(20, 6, 0);
    let mut model = RbmClusterer::new(6, 1, 5, 2, 0.5, 10, 0).unwrap();
    let report = model.fit(&data, 0).unwrap();
    assert!(report.encoder_loss.1 < report.encoder_loss.0);
    let labels = model.predict(&data.features).unwrap();
    for (i, l) in labels.iter().enumerate() {
        assert_eq!(*l == labels[0], i % 2 == 0);
    }
    assert!(model.score(&data, Exec::Parallel).unwrap() > 0.8);
}

#[test]
fn cluster_ids_are_bit_patterns() {
    let model = RbmClusterer::new(4, 1, 3, 3, 0.5, 1, 0).unwrap();
    assert_eq!(model.bits_to_id(&DVector::from_vec(vec![0.9, 0.1, 0.5])), 0b101);
    assert_eq!(model.bits_to_id(&DVector::from_vec(vec![0.1, 0.2, 0.3])), 0);
    assert!(RbmClusterer::new(4, 1, 3, 64, 0.5, 1, 0).is_err());
}
