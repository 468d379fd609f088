//! The Bayesian hybrid baseline.
//!
//! Scores each member by its log prior plus the log of smoothed feature
//! likelihoods, after removing collocations that overlap a stronger one.

use std::collections::BTreeSet;

use crate::corpus::{ConfusionSet, Document, Occurrence};
use crate::error::{Error, Result};
use crate::features::{chi_square, collect_stats, match_features, ExtractionConfig, Feature, FeatureSet, FeatureStats, LabelSource, Pruning};

/// Log scores closer than this are treated as tied.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesConfig {
    /// Interpolation strength: λ = N(W)/(N(W)+κ). Zero gives pure MLE.
    pub kappa: f64,
    pub resolve_dependencies: bool,
}

impl Default for BayesConfig {
    fn default() -> Self {
        Self {
            kappa: 10.0,
            resolve_dependencies: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesModel {
    members: Vec<String>,
    features: FeatureSet,
    extraction: ExtractionConfig,
    config: BayesConfig,
}

impl BayesModel {
    pub fn new(members: Vec<String>, features: FeatureSet, extraction: ExtractionConfig, config: BayesConfig) -> Result<Self> {
        if members.len() != features.stats().members() {
            return Err(Error::InvalidArgument(format!(
                "{} members but stats cover {}",
                members.len(),
                features.stats().members()
            )));
        }
        if features.stats().total() == 0 {
            return Err(Error::Empty("bayes model without training occurrences"));
        }
        if !(config.kappa >= 0.0) {
            return Err(Error::InvalidArgument(format!("kappa must be non-negative, got {}", config.kappa)));
        }
        Ok(Self {
            members,
            features,
            extraction,
            config,
        })
    }

    /// Prunes `stats` and builds the model. Stats from disjoint training sets
    /// can be merged beforehand for additive retraining.
    pub fn from_stats(
        set: &ConfusionSet,
        stats: &FeatureStats,
        pruning: Pruning,
        extraction: ExtractionConfig,
        config: BayesConfig,
    ) -> Result<Self> {
        Self::new(set.members.clone(), pruning.apply(stats), extraction, config)
    }

    pub fn train(
        set: &ConfusionSet,
        documents: &[Document],
        occurrences: &[Occurrence],
        labels: LabelSource,
        pruning: Pruning,
        extraction: ExtractionConfig,
        config: BayesConfig,
    ) -> Result<Self> {
        let stats = collect_stats(documents, occurrences, set.len(), &extraction, labels)?;
        Self::from_stats(set, &stats, pruning, extraction, config)
    }

    pub fn members(&self) -> &[String] {
        &self.members
    }

    pub fn features(&self) -> &FeatureSet {
        &self.features
    }

    pub fn extraction(&self) -> &ExtractionConfig {
        &self.extraction
    }

    pub fn config(&self) -> &BayesConfig {
        &self.config
    }

    fn stats(&self) -> &FeatureStats {
        self.features.stats()
    }

    pub fn prior(&self, member: usize) -> f64 {
        self.stats().member_totals()[member] as f64 / self.stats().total() as f64
    }

    pub fn priors(&self) -> Vec<f64> {
        (0..self.members.len()).map(|m| self.prior(m)).collect()
    }

    /// Interpolates P(f|W) with the unigram P(f).
    pub fn smoothed_prob(&self, feature: &Feature, member: usize) -> Result<f64> {
        let n_member = self.stats().member_totals()[member];
        if n_member == 0 {
            return Err(Error::Empty("member never seen in training"));
        }
        let n_member = n_member as f64;
        let mle = self.stats().count(feature, member) as f64 / n_member;
        let unigram = self.stats().present(feature) as f64 / self.stats().total() as f64;
        let lambda = n_member / (n_member + self.config.kappa);
        Ok(lambda * mle + (1.0 - lambda) * unigram)
    }

    /// Keeps one collocation per group of positionally overlapping ones: the
    /// one with the largest chi-square, then the longer pattern, then the
    /// smaller dump line. Context words always survive.
    pub fn resolve_dependencies(&self, active: &BTreeSet<Feature>) -> BTreeSet<Feature> {
        let collocations: Vec<(&Feature, (i32, i32))> =
            active.iter().filter_map(|f| f.span().map(|s| (f, s))).collect();
        let n = collocations.len();
        let mut group: Vec<usize> = (0..n).collect();
        fn root(group: &mut [usize], mut i: usize) -> usize {
            while group[i] != i {
                group[i] = group[group[i]];
                i = group[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (collocations[i].1, collocations[j].1);
                if a.0 < b.1 && b.0 < a.1 {
                    let (ri, rj) = (root(&mut group, i), root(&mut group, j));
                    group[ri] = rj;
                }
            }
        }

        let strength = |f: &Feature| {
            self.stats()
                .counts(f)
                .map(|_| chi_square(&self.stats().contingency(f)).unwrap_or(0.0))
                .unwrap_or(0.0)
        };
        let mut best: Vec<Option<(f64, usize, String, &Feature)>> = vec![None; n];
        for (i, (f, _)) in collocations.iter().enumerate() {
            let r = root(&mut group, i);
            let candidate = (strength(f), f.pattern_len(), f.to_string(), *f);
            let better = match &best[r] {
                None => true,
                Some((chi, len, dump, _)) => {
                    candidate.0 > *chi
                        || (candidate.0 == *chi && (candidate.1 > *len || (candidate.1 == *len && candidate.2 < *dump)))
                }
            };
            if better {
                best[r] = Some(candidate);
            }
        }

        let survivors: BTreeSet<&Feature> = best.into_iter().flatten().map(|b| b.3).collect();
        active
            .iter()
            .filter(|f| !f.is_collocation() || survivors.contains(f))
            .cloned()
            .collect()
    }

    /// log P(W) + Σ log P(f|W) over `evidence`, which is used as given.
    pub fn score(&self, evidence: &BTreeSet<Feature>, member: usize) -> f64 {
        let prior = self.prior(member);
        if prior == 0.0 {
            return f64::NEG_INFINITY;
        }
        let mut score = prior.ln();
        for f in evidence {
            // Cannot fail: prior > 0 implies N(W) > 0.
            score += self.smoothed_prob(f, member).map_or(f64::NEG_INFINITY, f64::ln);
        }
        score
    }

    /// Matched features after dependency resolution (when enabled).
    pub fn evidence(&self, active: &BTreeSet<Feature>) -> BTreeSet<Feature> {
        if self.config.resolve_dependencies {
            self.resolve_dependencies(active)
        } else {
            active.clone()
        }
    }

    pub fn scores(&self, active: &BTreeSet<Feature>) -> Vec<f64> {
        let evidence = self.evidence(active);
        (0..self.members.len()).map(|m| self.score(&evidence, m)).collect()
    }

    /// Argmax of the scores; ties go to the larger prior, then lower index.
    pub fn classify_features(&self, active: &BTreeSet<Feature>) -> usize {
        let scores = self.scores(active);
        let mut best = 0;
        for m in 1..scores.len() {
            let tied = scores[m] == scores[best] || (scores[m] - scores[best]).abs() <= TIE_TOLERANCE;
            if (!tied && scores[m] > scores[best]) || (tied && self.prior(m) > self.prior(best)) {
                best = m;
            }
        }
        best
    }

    pub fn active_features(&self, document: &Document, occurrence: &Occurrence) -> BTreeSet<Feature> {
        match_features(document, occurrence, &self.features, &self.extraction)
    }

    pub fn classify(&self, document: &Document, occurrence: &Occurrence) -> usize {
        self.classify_features(&self.active_features(document, occurrence))
    }
}
