use std::collections::BTreeMap;

use aqml_core::data::Dataset;
use aqml_core::datasets::separable_blobs;
use aqml_core::embed::{EmbeddingKind, LayerKind, ModelFamily, ModelKind, Registry, Task};
use aqml_core::exec::Exec;
use aqml_core::finder::{
    find_hyperparameters, find_model, options_for_trial, run_trial, seed_for_run, select_best, suggest_layers,
    FinderConfig, ModelOptions, ParamValue, Selection, Trial, TrialRecord, TrialStatus, TunerConfig,
};
use aqml_core::models::FitOptions;
use aqml_core::rng::PortableRng;
use aqml_core::store::{load_records, StudyStore};
use aqml_core::train::{BudgetLedger, LedgerTotals};
use aqml_core::Error;
use indexmap::IndexMap;
use proptest::prelude::*;

/// Reference xoshiro256** seeded through SplitMix64, written from the
/// published algorithms.
struct RefRng([u64; 4]);

impl RefRng {
    fn new(mut seed: u64) -> Self {
        let mut s = [0u64; 4];
        for slot in &mut s {
            seed = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = seed;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            *slot = z ^ (z >> 31);
        }
        Self(s)
    }

    fn next(&mut self) -> u64 {
        let s = &mut self.0;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }
}

#[test]
fn prng_matches_reference_trace() {
    let mut ours = PortableRng::new(7);
    let mut reference = RefRng::new(7);
    let frozen = [12923355070828475994u64, 5142052590334782674, 15488392906492639638];
    for want in frozen {
        assert_eq!(reference.next(), want);
        assert_eq!(ours.next_u64(), want);
    }
    let mut ours = PortableRng::new(123);
    let mut reference = RefRng::new(123);
    for _ in 0..1000 {
        assert_eq!(ours.next_u64(), reference.next());
    }
}

#[test]
fn seed_seven_layer_sequence() {
    let registry = Registry::builtin();
    let mut trial = Trial::new(0, 7);
    let layers = suggest_layers(&mut trial, 6, &registry).unwrap();
    let names: Vec<&str> = layers.iter().map(|l| l.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "BasicEntangler",
            "BasicEntangler",
            "BasicEntangler",
            "BasicEntangler",
            "BasicEntangler",
            "StronglyEntangling"
        ]
    );
}

#[test]
fn sampled_values_stay_in_declared_bounds() {
    let registry = Registry::builtin();
    let data = separable_blobs(40, 0);
    let config = FinderConfig::new(Task::Classification);
    let mut seen = BTreeMap::new();
    for id in 0..500 {
        let mut trial = Trial::new(id, config.trial_seed(id));
        let options = options_for_trial(&mut trial, &config, &registry, &data).unwrap();
        let ModelOptions::Supervised(o) = options else {
            panic!("supervised task")
        };
        let n_layers = o.layers.len();
        match o.family.as_str() {
            "QNN" => {
                assert!((1..=3).contains(&n_layers));
                assert!((15..=25).contains(&o.batch_size));
            }
            "QEK" => {
                assert!((3..=5).contains(&n_layers));
                assert_eq!(o.ridge_lambda, 1e-3);
            }
            other => panic!("unexpected family {other}"),
        }
        assert_eq!(trial.sampled()["n_layers"], ParamValue::Int(n_layers as i64));
        for i in 0..n_layers {
            assert!(trial.sampled().contains_key(&format!("layer_{i}")));
        }
        *seen.entry((o.family.clone(), n_layers)).or_insert(0) += 1;
    }
    assert_eq!(seen.len(), 6, "every (family, n_layers) pair is reachable: {seen:?}");
}

fn brute_force_best(records: &[TrialRecord]) -> Option<u64> {
    let complete: Vec<&TrialRecord> = records.iter().filter(|r| r.status == TrialStatus::Complete).collect();
    let feasible: Vec<&&TrialRecord> = complete.iter().filter(|r| r.feasible).collect();
    if !feasible.is_empty() {
        let min_calls = feasible.iter().map(|r| r.total_calls).min().unwrap();
        let cheapest: Vec<&&&TrialRecord> = feasible.iter().filter(|r| r.total_calls == min_calls).collect();
        let top = cheapest
            .iter()
            .map(|r| r.mean_score.unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        return cheapest
            .iter()
            .filter(|r| r.mean_score.unwrap() == top)
            .map(|r| r.trial_id)
            .min();
    }
    let top = complete
        .iter()
        .map(|r| r.mean_score.unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let best: Vec<&&TrialRecord> = complete.iter().filter(|r| r.mean_score.unwrap() == top).collect();
    let min_calls = best.iter().map(|r| r.total_calls).min()?;
    best.iter()
        .filter(|r| r.total_calls == min_calls)
        .map(|r| r.trial_id)
        .min()
}

fn record(trial_id: u64, score: Option<f64>, calls: u64, threshold: f64) -> TrialRecord {
    TrialRecord {
        trial_id,
        seed: trial_id,
        sampled: IndexMap::new(),
        per_seed_scores: score.into_iter().collect(),
        mean_score: score,
        total_calls: calls,
        ledger: LedgerTotals {
            scoring: calls,
            ..LedgerTotals::default()
        },
        threshold,
        feasible: score.is_some_and(|s| s >= threshold),
        status: if score.is_some() {
            TrialStatus::Complete
        } else {
            TrialStatus::Failed
        },
        error: score.is_none().then(|| "failed".to_string()),
    }
}

proptest! {
    #[test]
    fn selection_matches_brute_force(
        raw in prop::collection::vec((prop::option::weighted(0.8, 0u8..5), 0u64..6), 0..25),
        threshold in 0.0f64..1.0,
    ) {
        let mut records: Vec<TrialRecord> = raw
            .iter()
            .enumerate()
            .map(|(i, &(s, c))| record(i as u64, s.map(|s| s as f64 / 4.0), c * 100, threshold))
            .collect();
        // Selection must not depend on the order records arrive in.
        records.reverse();
        let got = select_best(&records).map(|s: Selection| {
            prop_assert_eq!(records[s.index].trial_id, s.trial_id);
            prop_assert_eq!(s.feasible, records[s.index].feasible);
            Ok(s.trial_id)
        });
        let got = got.transpose()?;
        prop_assert_eq!(got, brute_force_best(&records));
    }
}

#[test]
fn tie_breaks() {
    let t = 0.8;
    let recs = vec![
        record(0, Some(0.9), 400, t),
        record(1, Some(0.95), 400, t),
        record(2, Some(1.0), 600, t),
    ];
    assert_eq!(select_best(&recs).unwrap().trial_id, 1);
    let recs = vec![record(3, Some(0.9), 400, t), record(1, Some(0.9), 400, t)];
    assert_eq!(select_best(&recs).unwrap().trial_id, 1);
    let recs = vec![
        record(0, Some(0.5), 100, t),
        record(1, Some(0.7), 900, t),
        record(2, None, 0, t),
    ];
    let s = select_best(&recs).unwrap();
    assert_eq!((s.trial_id, s.feasible), (1, false));
    assert!(select_best(&[record(0, None, 0, t)]).is_none());
}

fn classification_config(n_trials: usize, n_cores: usize) -> FinderConfig {
    FinderConfig {
        n_trials,
        n_cores,
        ..FinderConfig::new(Task::Classification)
    }
}

#[test]
fn study_returns_cheapest_feasible_trial() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("study.jsonl");
    let store = StudyStore::create(&path).unwrap();
    let data = separable_blobs(40, 0);
    let config = classification_config(20, 2);
    let out = find_model(&config, &Registry::builtin(), &data, Some(&store)).unwrap();
    let records = load_records(&path).unwrap();
    assert_eq!(records.len(), 20);
    let feasible: Vec<&TrialRecord> = records.iter().filter(|r| r.is_complete() && r.feasible).collect();
    assert!(!feasible.is_empty());
    let min_calls = feasible.iter().map(|r| r.total_calls).min().unwrap();
    let winner = records.iter().find(|r| r.trial_id == out.selection.trial_id).unwrap();
    assert!(out.selection.feasible);
    assert_eq!(winner.total_calls, min_calls);
    assert_eq!(Some(winner.trial_id), brute_force_best(&records));
    assert_eq!(out.spec.metadata.trial_id, Some(winner.trial_id));
    assert_eq!(out.spec.metadata.total_calls, winner.total_calls);
    for r in &records {
        if r.is_complete() {
            assert_eq!(r.feasible, r.mean_score.unwrap() >= 0.8);
            assert_eq!(r.per_seed_scores.len(), 3);
            assert_eq!(r.total_calls, r.ledger.total());
        }
    }
}

#[test]
fn trial_calls_are_the_sum_of_its_runs() {
    let registry = Registry::builtin();
    let data = separable_blobs(30, 1);
    let config = classification_config(1, 1);
    for id in 0..4 {
        let rec = run_trial(id, &config, &registry, &data, None).unwrap();
        assert!(rec.is_complete());
        let mut trial = Trial::replay(id, rec.seed, rec.sampled.clone());
        let options = options_for_trial(&mut trial, &config, &registry, &data).unwrap();
        let mut total = LedgerTotals::default();
        let mut scores = Vec::new();
        for i in 0..3 {
            let seed = seed_for_run(config.base_seed, i);
            let ledger = BudgetLedger::new();
            let mut model = options.build(seed).unwrap();
            let opts = FitOptions {
                optimizer: config.optimizer,
                seed,
                exec: Exec::Sequential,
            };
            scores.push(model.fit(&data, &opts, &ledger).unwrap().unwrap());
            total += ledger.totals();
        }
        assert_eq!(rec.ledger, total);
        assert_eq!(rec.per_seed_scores, scores);
    }
}

#[test]
fn parallel_study_matches_sequential() {
    let data = separable_blobs(30, 2);
    let registry = Registry::builtin();
    let dir = tempfile::tempdir().unwrap();
    let mut by_cores = Vec::new();
    for cores in [1, 4] {
        let path = dir.path().join(format!("s{cores}.jsonl"));
        let store = StudyStore::create(&path).unwrap();
        let mut config = classification_config(12, cores);
        config.exec = if cores == 1 { Exec::Sequential } else { Exec::Parallel };
        let out = find_model(&config, &registry, &data, Some(&store)).unwrap();
        let mut stored = load_records(&path).unwrap();
        stored.sort_by_key(|r| r.trial_id);
        assert_eq!(stored, out.records);
        by_cores.push((stored, out.spec));
    }
    assert_eq!(by_cores[0], by_cores[1]);
}

#[test]
fn failing_family_is_contained() {
    let registry = Registry::empty()
        .with(EmbeddingKind::angle())
        .unwrap()
        .with(LayerKind::basic_entangler())
        .unwrap()
        .with(ModelFamily::new("BadQEK", ModelKind::QekClassifier, (3, 3)).with_fixed("ridge_lambda", 0.0))
        .unwrap()
        .with(ModelFamily::new("QNN", ModelKind::QnnClassifier, (1, 1)))
        .unwrap();
    let data = separable_blobs(20, 0);
    let config = classification_config(10, 1);
    let out = find_model(&config, &registry, &data, None).unwrap();
    let failed: Vec<&TrialRecord> = out.records.iter().filter(|r| !r.is_complete()).collect();
    assert!(!failed.is_empty());
    for r in &failed {
        assert_eq!(r.sampled["model"], ParamValue::Categorical("BadQEK".into()));
        assert!(!r.feasible);
        assert!(r.error.as_deref().unwrap().contains("ridge"));
    }
    assert_eq!(out.options.family(), "QNN");

    let only_bad = Registry::empty()
        .with(EmbeddingKind::angle())
        .unwrap()
        .with(LayerKind::basic_entangler())
        .unwrap()
        .with(ModelFamily::new("BadQEK", ModelKind::QekClassifier, (3, 3)).with_fixed("ridge_lambda", 0.0))
        .unwrap();
    assert!(matches!(
        find_model(&config, &only_bad, &data, None),
        Err(Error::StudyFailed)
    ));
}

#[test]
fn degenerate_data_fails_trials_not_the_process() {
    let features: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 1.0]).collect();
    let single_class = Dataset::new(features, Some(vec![1.0; 10])).unwrap();
    let config = classification_config(3, 1);
    assert!(matches!(
        find_model(&config, &Registry::builtin(), &single_class, None),
        Err(Error::StudyFailed)
    ));
    let mut bad = classification_config(3, 1);
    bad.n_seeds = 0;
    assert!(matches!(
        find_model(&bad, &Registry::builtin(), &single_class, None),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn tuner_compares_optimizers_on_a_fixed_architecture() {
    let data = separable_blobs(30, 0);
    let registry = Registry::builtin();
    let out = find_model(&classification_config(4, 1), &registry, &data, None).unwrap();
    let mut spec = out.spec.clone();
    if spec.model_kind != ModelKind::QnnClassifier {
        let circuit =
            aqml_core::qsim::CircuitSpec::new(2, EmbeddingKind::angle(), vec![LayerKind::basic_entangler()]).unwrap();
        let model =
            aqml_core::models::Model::QnnClassifier(aqml_core::models::QnnClassifier::new(circuit, 15, 0.8, 5, 0));
        spec = aqml_core::store::ModelSpecFile::from_model(
            &model,
            "QNN",
            data.feature_names.clone(),
            None,
            Default::default(),
        );
    }
    let config = TunerConfig {
        n_trials: 8,
        n_seeds: 2,
        ..TunerConfig::default()
    };
    let tuned = find_hyperparameters(&spec, &registry, &data, &config).unwrap();
    assert_eq!(tuned.records.len(), 8);
    for r in &tuned.records {
        let kind = &r.sampled["optimizer"];
        let ParamValue::Float(lr) = r.sampled["learning_rate"] else {
            panic!()
        };
        assert!((1e-3..=0.5).contains(&lr));
        assert_eq!(
            r.sampled.contains_key("momentum"),
            *kind == ParamValue::Categorical("momentum_gd".into())
        );
        assert_eq!(r.per_seed_scores.len(), 2);
    }
    let best = &tuned.records[tuned.best];
    for r in &tuned.records {
        let (a, b) = (best.mean_score.unwrap(), r.mean_score.unwrap());
        assert!(a > b || (a == b && best.total_calls <= r.total_calls));
    }
    assert_eq!(
        tuned.optimizer.learning_rate(),
        match best.sampled["learning_rate"] {
            ParamValue::Float(v) => v,
            _ => unreachable!(),
        }
    );

    let qek = find_model(
        &classification_config(1, 1),
        &Registry::empty()
            .with(EmbeddingKind::angle())
            .unwrap()
            .with(LayerKind::strongly_entangling())
            .unwrap()
            .with(ModelFamily::new("QEK", ModelKind::QekClassifier, (3, 3)))
            .unwrap(),
        &data,
        None,
    )
    .unwrap();
    assert!(matches!(
        find_hyperparameters(&qek.spec, &registry, &data, &config),
        Err(Error::UnsupportedModel(_))
    ));
}
