//! Evaluation regimes over one or two corpora.
//!
//! Every regime runs each confusion set independently (in parallel, results
//! kept in input order) and reports one row per set.

mod report;

pub use report::{
    accuracy, format_percent, latex_escape, Cell, Column, ColumnKind, EvalReport, ReportRow, RowOutcome, SweepReport,
    SweepRow, Tally, OVERALL,
};

use rayon::prelude::*;

use crate::bayes::{BayesConfig, BayesModel};
use crate::corpus::{corrupt, split_by_sentence, ConfusionSet, Corpus, Document, Occurrence};
use crate::error::{Error, Result};
use crate::features::{
    collect_stats, extract_features, match_features, ExtractionConfig, FeatureSet, FeatureStats, LabelSource, Pruning,
};
use crate::model::{Algorithm, SetModel};
use crate::winnow::{WinnowConfig, WinnowSModel};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    /// Pruning regimes compared in the within-corpus table.
    pub prunings: Vec<Pruning>,
    /// Pruning used by every other regime.
    pub pruning: Pruning,
    /// Fraction of corpus A sentences used for training.
    pub train_fraction: f64,
    /// Fraction of corpus B sentences held out for testing; the rest is the
    /// unsupervised training part.
    pub test_fraction: f64,
    /// Corruption applied to the unsupervised part.
    pub percent: f64,
    pub seed: u64,
    pub extraction: ExtractionConfig,
    pub bayes: BayesConfig,
    pub winnow: WinnowConfig,
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algorithms: vec![Algorithm::Bayes, Algorithm::WinnowS],
            prunings: vec![Pruning::Pruned, Pruning::Unpruned],
            pruning: Pruning::Unpruned,
            train_fraction: 0.8,
            test_fraction: 0.4,
            percent: 5.0,
            seed: 1,
            extraction: ExtractionConfig::default(),
            bayes: BayesConfig::default(),
            winnow: WinnowConfig::default(),
            parallel: true,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::InvalidArgument("no algorithms selected".into()));
        }
        if self.prunings.is_empty() {
            return Err(Error::InvalidArgument("no pruning regimes selected".into()));
        }
        if !(0.0..=1.0).contains(&self.train_fraction) {
            return Err(Error::InvalidArgument(format!("train fraction {} outside [0, 1]", self.train_fraction)));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!("test fraction {} outside (0, 1]", self.test_fraction)));
        }
        if !(0.0..=100.0).contains(&self.percent) {
            return Err(Error::InvalidArgument(format!("corruption percent {} outside [0, 100]", self.percent)));
        }
        Ok(())
    }

    fn b_seed(&self) -> u64 {
        self.seed.wrapping_add(1)
    }

    fn corruption_seed(&self) -> u64 {
        self.seed.wrapping_add(2)
    }
}

/// Occurrences from one corpus together with the label each should teach.
#[derive(Debug, Clone, Copy)]
pub struct TrainingPart<'a> {
    pub documents: &'a [Document],
    pub occurrences: &'a [Occurrence],
    pub labels: LabelSource,
}

impl<'a> TrainingPart<'a> {
    pub fn new(documents: &'a [Document], occurrences: &'a [Occurrence], labels: LabelSource) -> Self {
        Self {
            documents,
            occurrences,
            labels,
        }
    }
}

/// Feature statistics pooled over all parts.
pub fn pooled_stats(set: &ConfusionSet, parts: &[TrainingPart<'_>], extraction: &ExtractionConfig) -> Result<FeatureStats> {
    let mut pooled: Option<FeatureStats> = None;
    for part in parts.iter().filter(|p| !p.occurrences.is_empty()) {
        let stats = collect_stats(part.documents, part.occurrences, set.len(), extraction, part.labels)?;
        match pooled.as_mut() {
            Some(acc) => acc.merge(&stats),
            None => pooled = Some(stats),
        }
    }
    pooled.ok_or(Error::Empty("no training occurrences"))
}

/// Trains one learner on a fixed feature set. WinnowS sees the parts in
/// order, each occurrence once.
pub fn train_with_features(
    algorithm: Algorithm,
    set: &ConfusionSet,
    features: FeatureSet,
    parts: &[TrainingPart<'_>],
    config: &ExperimentConfig,
) -> Result<SetModel> {
    match algorithm {
        Algorithm::Bayes => Ok(SetModel::Bayes(BayesModel::new(
            set.members.clone(),
            features,
            config.extraction,
            config.bayes,
        )?)),
        Algorithm::WinnowS => {
            let mut model = WinnowSModel::new(set.members.clone(), config.winnow.clone(), config.extraction)?;
            for part in parts {
                for occ in part.occurrences {
                    let active = match_features(&part.documents[occ.doc], occ, &features, &config.extraction);
                    model.train_features(&active, part.labels.label(occ));
                }
            }
            Ok(SetModel::WinnowS(model))
        }
    }
}

/// Pools statistics, prunes them and trains `algorithm`. Returns the model
/// and the number of features it was given.
pub fn train_model(
    algorithm: Algorithm,
    set: &ConfusionSet,
    parts: &[TrainingPart<'_>],
    pruning: Pruning,
    config: &ExperimentConfig,
) -> Result<(SetModel, usize)> {
    let stats = pooled_stats(set, parts, &config.extraction)?;
    let features = pruning.apply(&stats);
    let n = features.len();
    Ok((train_with_features(algorithm, set, features, parts, config)?, n))
}

/// Accuracy against gold labels.
pub fn evaluate(model: &SetModel, documents: &[Document], occurrences: &[Occurrence]) -> Tally {
    let mut tally = Tally::default();
    for occ in occurrences {
        tally.record(model.classify(&documents[occ.doc], occ), occ.gold);
    }
    tally
}

/// Predicts each occurrence of `stream`, then learns from its gold label.
pub fn incremental_winnows(model: &mut WinnowSModel, documents: &[Document], stream: &[Occurrence]) -> Tally {
    let mut tally = Tally::default();
    for occ in stream {
        let active = extract_features(&documents[occ.doc], occ, model.extraction());
        tally.record(model.classify_features(&active), occ.gold);
        model.train_features(&active, occ.gold);
    }
    tally
}

/// Bayes counterpart of [`incremental_winnows`]: the statistics grow by one
/// occurrence after each prediction and the model is rebuilt from them.
pub fn incremental_bayes(
    set: &ConfusionSet,
    mut stats: FeatureStats,
    pruning: Pruning,
    documents: &[Document],
    stream: &[Occurrence],
    config: &ExperimentConfig,
) -> Result<Tally> {
    let mut tally = Tally::default();
    for occ in stream {
        let model = BayesModel::from_stats(set, &stats, pruning, config.extraction, config.bayes)?;
        let active = extract_features(&documents[occ.doc], occ, &config.extraction);
        tally.record(model.classify_features(&active), occ.gold);
        stats.add(&active, occ.gold);
    }
    Ok(tally)
}

fn per_set<T, F>(sets: &[ConfusionSet], parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&ConfusionSet) -> Result<T> + Sync,
{
    if parallel {
        sets.par_iter().map(&f).collect()
    } else {
        sets.iter().map(f).collect()
    }
}

fn skipped(reason: &str) -> RowOutcome {
    RowOutcome::Skipped(reason.to_string())
}

fn within_columns(config: &ExperimentConfig) -> Vec<Column> {
    let mut columns = vec![Column::new("Test cases", "", ColumnKind::TestCases)];
    for pruning in &config.prunings {
        let group = pruning_label(*pruning);
        columns.push(Column::new(group, "Features", ColumnKind::Features));
        for alg in &config.algorithms {
            columns.push(Column::new(group, alg.label(), ColumnKind::Accuracy));
        }
    }
    columns
}

pub fn pruning_label(pruning: Pruning) -> &'static str {
    match pruning {
        Pruning::Pruned => "Pruned",
        Pruning::Unpruned => "Unpruned",
    }
}

/// Train and test on disjoint sentence samples of one corpus, under each
/// pruning regime.
pub fn run_within(corpus: &Corpus, sets: &[ConfusionSet], config: &ExperimentConfig) -> Result<EvalReport> {
    config.validate()?;
    let docs = &corpus.documents;
    let rows = per_set(sets, config.parallel, |set| {
        let outcome = (|| {
            let occs = set.occurrences(corpus);
            if occs.is_empty() {
                return Ok(skipped("no occurrences"));
            }
            let split = split_by_sentence(&occs, config.train_fraction, config.seed)?;
            if split.train.is_empty() {
                return Ok(skipped("no training occurrences"));
            }
            if split.test.is_empty() {
                return Ok(skipped("no test occurrences"));
            }
            let parts = [TrainingPart::new(docs, &split.train, LabelSource::Gold)];
            let stats = pooled_stats(set, &parts, &config.extraction)?;
            let mut cells = vec![Cell::Count(split.test.len())];
            for pruning in &config.prunings {
                let features = pruning.apply(&stats);
                cells.push(Cell::Count(features.len()));
                for alg in &config.algorithms {
                    let model = train_with_features(*alg, set, features.clone(), &parts, config)?;
                    cells.push(Cell::Accuracy(evaluate(&model, docs, &split.test)));
                }
            }
            Ok(RowOutcome::Scored(cells))
        })()?;
        Ok(ReportRow {
            set: set.id.clone(),
            outcome,
        })
    })?;
    Ok(EvalReport {
        columns: within_columns(config),
        rows,
    })
}

/// Occurrence partition used by the two-corpus regimes.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoCorpusPlan {
    /// Training part of corpus A.
    pub a_train: Vec<Occurrence>,
    /// Test part of corpus A.
    pub a_test: Vec<Occurrence>,
    /// Unsupervised part of corpus B, before corruption.
    pub b_unsup: Vec<Occurrence>,
    /// Held-out test part of corpus B.
    pub b_test: Vec<Occurrence>,
}

impl TwoCorpusPlan {
    pub fn new(set: &ConfusionSet, a: &Corpus, b: &Corpus, config: &ExperimentConfig) -> Result<Self> {
        let a_split = split_by_sentence(&set.occurrences(a), config.train_fraction, config.seed)?;
        let b_split = split_by_sentence(&set.occurrences(b), 1.0 - config.test_fraction, config.b_seed())?;
        Ok(Self {
            a_train: a_split.train,
            a_test: a_split.test,
            b_unsup: b_split.train,
            b_test: b_split.test,
        })
    }

    fn skip_reason(&self, need_a_test: bool) -> Option<&'static str> {
        if self.a_train.is_empty() {
            Some("no training occurrences in corpus A")
        } else if need_a_test && self.a_test.is_empty() {
            Some("no test occurrences in corpus A")
        } else if self.b_test.is_empty() {
            Some("no test occurrences in corpus B")
        } else {
            None
        }
    }

    /// The unsupervised part after the configured corruption.
    pub fn corrupted(&self, set: &ConfusionSet, percent: f64, config: &ExperimentConfig) -> Result<Vec<Occurrence>> {
        corrupt(&self.b_unsup, set.len(), percent, config.corruption_seed())
    }
}

/// Train on corpus A, test on held-out parts of A and of B.
pub fn run_across(a: &Corpus, b: &Corpus, sets: &[ConfusionSet], config: &ExperimentConfig) -> Result<EvalReport> {
    config.validate()?;
    let rows = per_set(sets, config.parallel, |set| {
        let plan = TwoCorpusPlan::new(set, a, b, config)?;
        let outcome = match plan.skip_reason(true) {
            Some(reason) => skipped(reason),
            None => {
                let parts = [TrainingPart::new(&a.documents, &plan.a_train, LabelSource::Gold)];
                let mut cells = vec![Cell::Count(plan.a_test.len()), Cell::Count(plan.b_test.len())];
                for alg in &config.algorithms {
                    let (model, _) = train_model(*alg, set, &parts, config.pruning, config)?;
                    cells.push(Cell::Accuracy(evaluate(&model, &a.documents, &plan.a_test)));
                    cells.push(Cell::Accuracy(evaluate(&model, &b.documents, &plan.b_test)));
                }
                RowOutcome::Scored(cells)
            }
        };
        Ok(ReportRow {
            set: set.id.clone(),
            outcome,
        })
    })?;
    let mut columns = vec![
        Column::new("Test cases", "Within", ColumnKind::TestCases),
        Column::new("Test cases", "Across", ColumnKind::TestCases),
    ];
    for alg in &config.algorithms {
        columns.push(Column::new(alg.label(), "Within", ColumnKind::Accuracy));
        columns.push(Column::new(alg.label(), "Across", ColumnKind::Accuracy));
    }
    Ok(EvalReport { columns, rows })
}

pub const SUP_ONLY: &str = "Sup only";
pub const SUP_UNSUP: &str = "Sup/unsup";
pub const INCR: &str = "Incr";

struct TwoCorpusScores {
    test_cases: usize,
    sup_only: Vec<Tally>,
    sup_unsup: Vec<Tally>,
    incremental: Vec<Option<Tally>>,
}

/// Runs the supervised, adapted and incremental learners of one set.
fn two_corpus_scores(
    set: &ConfusionSet,
    a: &Corpus,
    b: &Corpus,
    plan: &TwoCorpusPlan,
    config: &ExperimentConfig,
    with_unsup: bool,
    incremental_for: &[Algorithm],
) -> Result<TwoCorpusScores> {
    let sup = [TrainingPart::new(&a.documents, &plan.a_train, LabelSource::Gold)];
    let sup_stats = pooled_stats(set, &sup, &config.extraction)?;
    let corrupted = if with_unsup {
        plan.corrupted(set, config.percent, config)?
    } else {
        Vec::new()
    };
    let both = [sup[0], TrainingPart::new(&b.documents, &corrupted, LabelSource::Actual)];
    let mut scores = TwoCorpusScores {
        test_cases: plan.b_test.len(),
        sup_only: Vec::new(),
        sup_unsup: Vec::new(),
        incremental: Vec::new(),
    };
    for alg in &config.algorithms {
        let sup_model = train_with_features(*alg, set, config.pruning.apply(&sup_stats), &sup, config)?;
        scores.sup_only.push(evaluate(&sup_model, &b.documents, &plan.b_test));
        if with_unsup {
            let (model, _) = train_model(*alg, set, &both, config.pruning, config)?;
            scores.sup_unsup.push(evaluate(&model, &b.documents, &plan.b_test));
        }
        let incremental = match sup_model {
            _ if !incremental_for.contains(alg) => None,
            SetModel::WinnowS(mut m) => Some(incremental_winnows(&mut m, &b.documents, &plan.b_test)),
            SetModel::Bayes(_) => Some(incremental_bayes(
                set,
                sup_stats.clone(),
                config.pruning,
                &b.documents,
                &plan.b_test,
                config,
            )?),
        };
        scores.incremental.push(incremental);
    }
    Ok(scores)
}

/// Supervised training on A, then unsupervised training on a corrupted
/// part of B, tested on the rest of B. WinnowS also gets an incremental
/// column.
pub fn run_supunsup(a: &Corpus, b: &Corpus, sets: &[ConfusionSet], config: &ExperimentConfig) -> Result<EvalReport> {
    config.validate()?;
    let rows = per_set(sets, config.parallel, |set| {
        let plan = TwoCorpusPlan::new(set, a, b, config)?;
        let outcome = match plan.skip_reason(false) {
            Some(reason) => skipped(reason),
            None => {
                let scores = two_corpus_scores(set, a, b, &plan, config, true, &[Algorithm::WinnowS])?;
                let mut cells = vec![Cell::Count(scores.test_cases)];
                for i in 0..config.algorithms.len() {
                    cells.push(Cell::Accuracy(scores.sup_only[i]));
                    cells.push(Cell::Accuracy(scores.sup_unsup[i]));
                    if let Some(t) = scores.incremental[i] {
                        cells.push(Cell::Accuracy(t));
                    }
                }
                RowOutcome::Scored(cells)
            }
        };
        Ok(ReportRow {
            set: set.id.clone(),
            outcome,
        })
    })?;
    let mut columns = vec![Column::new("Test cases", "", ColumnKind::TestCases)];
    for alg in &config.algorithms {
        columns.push(Column::new(alg.label(), SUP_ONLY, ColumnKind::Accuracy));
        columns.push(Column::new(alg.label(), SUP_UNSUP, ColumnKind::Accuracy));
        if *alg == Algorithm::WinnowS {
            columns.push(Column::new(alg.label(), INCR, ColumnKind::Accuracy));
        }
    }
    Ok(EvalReport { columns, rows })
}

/// Supervised training on A, then learning online from the gold labels of
/// B's test part while predicting it.
pub fn run_incremental(a: &Corpus, b: &Corpus, sets: &[ConfusionSet], config: &ExperimentConfig) -> Result<EvalReport> {
    config.validate()?;
    let rows = per_set(sets, config.parallel, |set| {
        let plan = TwoCorpusPlan::new(set, a, b, config)?;
        let outcome = match plan.skip_reason(false) {
            Some(reason) => skipped(reason),
            None => {
                let scores = two_corpus_scores(set, a, b, &plan, config, false, &config.algorithms)?;
                let mut cells = vec![Cell::Count(scores.test_cases)];
                for i in 0..config.algorithms.len() {
                    cells.push(Cell::Accuracy(scores.sup_only[i]));
                    cells.push(Cell::Accuracy(scores.incremental[i].unwrap_or_default()));
                }
                RowOutcome::Scored(cells)
            }
        };
        Ok(ReportRow {
            set: set.id.clone(),
            outcome,
        })
    })?;
    let mut columns = vec![Column::new("Test cases", "", ColumnKind::TestCases)];
    for alg in &config.algorithms {
        columns.push(Column::new(alg.label(), SUP_ONLY, ColumnKind::Accuracy));
        columns.push(Column::new(alg.label(), INCR, ColumnKind::Accuracy));
    }
    Ok(EvalReport { columns, rows })
}

/// Series name used in sweep reports, e.g. `WinnowS sup/unsup`.
pub fn series_name(algorithm: Algorithm, adapted: bool) -> String {
    format!("{} {}", algorithm.label(), if adapted { "sup/unsup" } else { "sup only" })
}

/// Sup/unsup accuracy as a function of the corruption percentage. The
/// supervised baseline is trained once per set and repeated at every
/// percentage.
pub fn corruption_sweep(
    a: &Corpus,
    b: &Corpus,
    sets: &[ConfusionSet],
    config: &ExperimentConfig,
    percents: &[f64],
) -> Result<SweepReport> {
    config.validate()?;
    if let Some(p) = percents.iter().find(|p| !(0.0..=100.0).contains(*p)) {
        return Err(Error::InvalidArgument(format!("corruption percent {p} outside [0, 100]")));
    }
    let per = per_set(sets, config.parallel, |set| {
        let plan = TwoCorpusPlan::new(set, a, b, config)?;
        if let Some(reason) = plan.skip_reason(false) {
            return Ok(Err((set.id.clone(), reason.to_string())));
        }
        let sup = [TrainingPart::new(&a.documents, &plan.a_train, LabelSource::Gold)];
        let mut rows = Vec::new();
        for alg in &config.algorithms {
            let (sup_model, _) = train_model(*alg, set, &sup, config.pruning, config)?;
            let baseline = evaluate(&sup_model, &b.documents, &plan.b_test);
            for &percent in percents {
                rows.push(SweepRow {
                    set: set.id.clone(),
                    percent,
                    series: series_name(*alg, false),
                    accuracy: baseline,
                });
            }
            for &percent in percents {
                let corrupted = plan.corrupted(set, percent, config)?;
                let parts = [sup[0], TrainingPart::new(&b.documents, &corrupted, LabelSource::Actual)];
                let (model, _) = train_model(*alg, set, &parts, config.pruning, config)?;
                rows.push(SweepRow {
                    set: set.id.clone(),
                    percent,
                    series: series_name(*alg, true),
                    accuracy: evaluate(&model, &b.documents, &plan.b_test),
                });
            }
        }
        Ok(Ok(rows))
    })?;
    let mut report = SweepReport::default();
    for entry in per {
        match entry {
            Ok(rows) => report.rows.extend(rows),
            Err(skip) => report.skipped.push(skip),
        }
    }
    Ok(report)
}
