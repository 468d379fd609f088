mod common;

use std::collections::BTreeSet;

use ctxspell::corpus::{ConfusionSet, Occurrence};
use ctxspell::harness::{
    self, accuracy, corruption_sweep, run_incremental, run_supunsup, run_within, series_name, ExperimentConfig,
    TwoCorpusPlan, SUP_ONLY, SUP_UNSUP,
};
use ctxspell::model::Algorithm;

fn keys(occs: &[Occurrence]) -> BTreeSet<(usize, usize)> {
    occs.iter().map(Occurrence::sentence_key).collect()
}

fn corpus(seed: u64, n: usize) -> ctxspell::corpus::Corpus {
    let lines: Vec<String> = common::weather_text(seed, n).lines().map(str::to_string).collect();
    common::corpus_of(&lines, &common::dictionary())
}

#[test]
fn two_corpus_plan_keeps_test_sentences_out_of_training() {
    let (a, b) = (corpus(1, 200), corpus(2, 200));
    let set = common::weather_set();
    for seed in 0..5 {
        let config = ExperimentConfig { seed, ..ExperimentConfig::default() };
        let plan = TwoCorpusPlan::new(&set, &a, &b, &config).unwrap();
        assert!(keys(&plan.a_train).is_disjoint(&keys(&plan.a_test)));
        assert!(keys(&plan.b_unsup).is_disjoint(&keys(&plan.b_test)));
        assert_eq!(plan.b_unsup.len() + plan.b_test.len(), set.occurrences(&b).len());
        let corrupted = plan.corrupted(&set, 20.0, &config).unwrap();
        assert_eq!(keys(&corrupted), keys(&plan.b_unsup));
        assert!(keys(&corrupted).is_disjoint(&keys(&plan.b_test)));
    }
}

#[test]
fn within_pruned_feature_counts_never_exceed_unpruned() {
    let c = corpus(3, 400);
    let sets = [common::weather_set(), ConfusionSet::new(&["rain", "sun"]).unwrap()];
    let report = run_within(&c, &sets, &ExperimentConfig::default()).unwrap();
    for set in &sets {
        let pruned = report.count(&set.id, "Pruned", "Features").unwrap();
        let unpruned = report.count(&set.id, "Unpruned", "Features").unwrap();
        assert!(pruned <= unpruned, "{}: {pruned} > {unpruned}", set.id);
    }
}

#[test]
fn supunsup_and_incremental_share_the_sup_only_baseline() {
    let (a, b) = (corpus(4, 300), corpus(5, 300));
    let sets = [common::weather_set()];
    let config = ExperimentConfig::default();
    let s = run_supunsup(&a, &b, &sets, &config).unwrap();
    let i = run_incremental(&a, &b, &sets, &config).unwrap();
    let id = &sets[0].id;
    for alg in ["Bayes", "WinnowS"] {
        let x = s.accuracy(id, alg, SUP_ONLY).unwrap();
        assert_eq!(Some(x), i.accuracy(id, alg, SUP_ONLY));
        assert!(s.accuracy(id, alg, SUP_UNSUP).is_some());
    }
}

#[test]
fn sweep_baseline_is_flat_and_zero_percent_matches_clean_training() {
    let (a, b) = (corpus(6, 250), corpus(7, 250));
    let sets = [common::weather_set()];
    let config = ExperimentConfig::default();
    let report = corruption_sweep(&a, &b, &sets, &config, &[0.0, 10.0, 20.0]).unwrap();
    let id = &sets[0].id;
    for alg in [Algorithm::Bayes, Algorithm::WinnowS] {
        let base = report.series(id, &series_name(alg, false));
        assert_eq!(base.len(), 3);
        assert!(base.iter().all(|(_, acc)| *acc == base[0].1));
        assert_eq!(report.series(id, &series_name(alg, true)).len(), 3);
    }
    let s = run_supunsup(&a, &b, &sets, &ExperimentConfig { percent: 0.0, ..config }).unwrap();
    let clean = report.series(id, &series_name(Algorithm::Bayes, true))[0].1;
    assert!((s.accuracy(id, "Bayes", SUP_UNSUP).unwrap() - clean).abs() < 1e-9);
}

#[test]
fn sets_absent_from_a_corpus_are_skipped_not_scored() {
    let c = corpus(8, 100);
    let sets = [ConfusionSet::new(&["their", "there"]).unwrap()];
    let report = run_within(&c, &sets, &ExperimentConfig::default()).unwrap();
    assert!(report.row(&sets[0].id).unwrap().cells().is_none());
    assert!(report.to_tsv().contains("# skipped"));
}

#[test]
fn accuracy_rejects_mismatched_or_empty_input() {
    assert!(accuracy(&[], &[]).is_err());
    assert!(accuracy(&[0, 1], &[0]).is_err());
    assert_eq!(accuracy(&[0, 1, 1, 0], &[0, 1, 0, 0]).unwrap(), 75.0);
}

#[test]
fn invalid_fractions_are_rejected() {
    let c = corpus(9, 20);
    let bad = ExperimentConfig { train_fraction: 1.2, ..ExperimentConfig::default() };
    assert!(run_within(&c, &[common::weather_set()], &bad).is_err());
    let bad = ExperimentConfig { percent: -1.0, ..ExperimentConfig::default() };
    assert!(harness::run_across(&c, &c, &[common::weather_set()], &bad).is_err());
}
