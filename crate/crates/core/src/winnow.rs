//! WinnowS: per-member clouds of Winnow2 nodes combined by weighted majority.
//!
//! Each node keeps a sparse table of positive weights over an open attribute
//! universe. An attribute enters a node's table only when the node is
//! promoted on an example where it is active. Nodes of one cloud differ only
//! in their demotion rate; the cloud votes with the sum of its nodes'
//! activations, each scaled by an expert weight that shrinks by γ on every
//! mistake the node makes.
//!
//! All bookkeeping (example counter, running estimate of active-set size)
//! advances only on examples that change some weight, so replaying examples
//! the model already gets right is a no-op.

use std::collections::BTreeSet;

use indexmap::IndexSet;

use crate::corpus::{Document, Occurrence};
use crate::error::{Error, Result};
use crate::features::{extract_features, ExtractionConfig, Feature};

/// Attribute identifier inside one model's vocabulary.
pub type AttrId = u32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WinnowParams {
    pub theta: f64,
    pub alpha: f64,
    /// Attributes whose weight falls below `epsilon · max_weight` are dropped.
    pub epsilon: f64,
    /// Updates between drop sweeps.
    pub sweep_interval: u32,
}

impl Default for WinnowParams {
    fn default() -> Self {
        Self {
            theta: 1.0,
            alpha: 1.5,
            epsilon: (2.0f64).powi(-20),
            sweep_interval: 1000,
        }
    }
}

impl WinnowParams {
    fn validate(&self, beta: f64) -> Result<()> {
        if !(self.alpha > 1.0) || !(beta > 0.0 && beta < 1.0) || !(self.theta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "winnow needs alpha > 1, 0 < beta < 1, theta > 0 (alpha={}, beta={beta}, theta={})",
                self.alpha, self.theta
            )));
        }
        if !(self.epsilon >= 0.0 && self.epsilon < 1.0) || self.sweep_interval == 0 {
            return Err(Error::InvalidArgument(format!(
                "drop ratio must lie in [0, 1) and sweep interval be positive (epsilon={}, interval={})",
                self.epsilon, self.sweep_interval
            )));
        }
        Ok(())
    }
}

/// γ(t) = max(γ_min, 1 − t/T).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSchedule {
    pub min: f64,
    pub horizon: f64,
}

impl Default for GammaSchedule {
    fn default() -> Self {
        Self {
            min: 0.5,
            horizon: 1000.0,
        }
    }
}

impl GammaSchedule {
    /// Never penalizes: all expert weights stay at 1.
    pub fn constant() -> Self {
        Self { min: 1.0, horizon: 1000.0 }
    }

    pub fn gamma(&self, t: u64) -> f64 {
        if self.horizon <= 0.0 {
            return self.min;
        }
        (1.0 - t as f64 / self.horizon).max(self.min)
    }

    fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.min <= 1.0) || self.horizon.is_nan() {
            return Err(Error::InvalidArgument(format!("gamma floor must lie in (0, 1], got {}", self.min)));
        }
        Ok(())
    }
}

/// A single Winnow2 learner.
#[derive(Debug, Clone, PartialEq)]
pub struct WinnowNode {
    beta: f64,
    params: WinnowParams,
    /// Indexed by attribute id; 0.0 marks an attribute not in the table.
    weights: Vec<f64>,
    stored: usize,
    seen: u64,
    d_estimate: f64,
    pending: u32,
}

impl WinnowNode {
    pub fn new(beta: f64, params: WinnowParams) -> Result<Self> {
        params.validate(beta)?;
        Ok(Self {
            beta,
            params,
            weights: Vec::new(),
            stored: 0,
            seen: 0,
            d_estimate: 0.0,
            pending: 0,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn params(&self) -> &WinnowParams {
        &self.params
    }

    pub fn weight(&self, attr: AttrId) -> Option<f64> {
        self.weights.get(attr as usize).copied().filter(|w| *w > 0.0)
    }

    /// Stored `(attribute, weight)` pairs in attribute order.
    pub fn weights(&self) -> impl Iterator<Item = (AttrId, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(i, w)| (i as AttrId, *w))
    }

    pub fn stored(&self) -> usize {
        self.stored
    }

    /// Number of examples this node has updated on.
    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn d_estimate(&self) -> f64 {
        self.d_estimate
    }

    pub fn activation(&self, active: &[AttrId]) -> f64 {
        active
            .iter()
            .filter_map(|&a| self.weights.get(a as usize))
            .sum()
    }

    pub fn predict(&self, active: &[AttrId]) -> bool {
        self.activation(active) > self.params.theta
    }

    /// Mistake-driven Winnow2 step. Returns whether the node was wrong.
    pub fn update(&mut self, active: &[AttrId], label: bool) -> bool {
        if self.predict(active) == label {
            return false;
        }
        self.seen += 1;
        self.d_estimate += (active.len() as f64 - self.d_estimate) / self.seen as f64;
        if label {
            let initial = 1.0 / self.d_estimate.max(1.0);
            for &a in active {
                let a = a as usize;
                if a >= self.weights.len() {
                    self.weights.resize(a + 1, 0.0);
                }
                let w = &mut self.weights[a];
                if *w == 0.0 {
                    *w = initial;
                    self.stored += 1;
                }
                *w *= self.params.alpha;
            }
        } else {
            for &a in active {
                if let Some(w) = self.weights.get_mut(a as usize).filter(|w| **w > 0.0) {
                    *w = (*w * self.beta).max(f64::MIN_POSITIVE);
                }
            }
        }
        self.pending += 1;
        if self.pending >= self.params.sweep_interval {
            self.drop_weak();
            self.pending = 0;
        }
        true
    }

    fn drop_weak(&mut self) {
        let max = self.weights.iter().copied().fold(0.0, f64::max);
        let cutoff = self.params.epsilon * max;
        for w in self.weights.iter_mut().filter(|w| **w > 0.0 && **w < cutoff) {
            *w = 0.0;
            self.stored -= 1;
        }
        while self.weights.last() == Some(&0.0) {
            self.weights.pop();
        }
    }

    pub(crate) fn restore(
        beta: f64,
        params: WinnowParams,
        weights: &[(AttrId, f64)],
        seen: u64,
        d_estimate: f64,
        pending: u32,
    ) -> Result<Self> {
        let mut node = Self::new(beta, params)?;
        for &(a, w) in weights {
            if !(w > 0.0) {
                return Err(Error::InvalidArgument(format!("non-positive stored weight {w}")));
            }
            let a = a as usize;
            if a >= node.weights.len() {
                node.weights.resize(a + 1, 0.0);
            }
            if node.weights[a] == 0.0 {
                node.stored += 1;
            }
            node.weights[a] = w;
        }
        node.seen = seen;
        node.d_estimate = d_estimate;
        node.pending = pending;
        Ok(node)
    }

    pub(crate) fn pending(&self) -> u32 {
        self.pending
    }
}

/// The nodes representing one member, with their expert weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Cloud {
    pub nodes: Vec<WinnowNode>,
    pub expert_weights: Vec<f64>,
    pub mistakes: Vec<u64>,
}

impl Cloud {
    pub fn new(betas: &[f64], params: WinnowParams) -> Result<Self> {
        let nodes = betas
            .iter()
            .map(|&b| WinnowNode::new(b, params))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            expert_weights: vec![1.0; nodes.len()],
            mistakes: vec![0; nodes.len()],
            nodes,
        })
    }

    /// Σ_j v_j · activation_j.
    pub fn score(&self, active: &[AttrId]) -> f64 {
        self.nodes
            .iter()
            .zip(&self.expert_weights)
            .map(|(n, v)| v * n.activation(active))
            .sum()
    }

    /// Rescales the expert weights to mean 1, keeping their ratios. Keeps
    /// scores of clouds with different mistake histories comparable.
    pub fn normalize_experts(&mut self) {
        let sum: f64 = self.expert_weights.iter().sum();
        let scale = self.expert_weights.len() as f64 / sum;
        for v in &mut self.expert_weights {
            *v = (*v * scale).max(f64::MIN_POSITIVE);
        }
    }
}

pub const DEFAULT_BETAS: [f64; 5] = [0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Clone, PartialEq)]
pub struct WinnowConfig {
    pub params: WinnowParams,
    pub gamma: GammaSchedule,
    pub betas: Vec<f64>,
}

impl Default for WinnowConfig {
    fn default() -> Self {
        Self {
            params: WinnowParams::default(),
            gamma: GammaSchedule::default(),
            betas: DEFAULT_BETAS.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WinnowSModel {
    members: Vec<String>,
    config: WinnowConfig,
    extraction: ExtractionConfig,
    clouds: Vec<Cloud>,
    /// Examples that changed the model.
    t: u64,
    member_seen: Vec<u64>,
    vocab: IndexSet<Feature>,
}

impl WinnowSModel {
    pub fn new(members: Vec<String>, config: WinnowConfig, extraction: ExtractionConfig) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::InvalidArgument("WinnowS needs at least two members".into()));
        }
        if config.betas.is_empty() {
            return Err(Error::InvalidArgument("a cloud needs at least one node".into()));
        }
        let distinct: BTreeSet<u64> = config.betas.iter().map(|b| b.to_bits()).collect();
        if distinct.len() != config.betas.len() {
            return Err(Error::InvalidArgument("cloud demotion rates must be distinct".into()));
        }
        config.gamma.validate()?;
        let clouds = (0..members.len())
            .map(|_| Cloud::new(&config.betas, config.params))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            member_seen: vec![0; members.len()],
            members,
            config,
            extraction,
            clouds,
            t: 0,
            vocab: IndexSet::new(),
        })
    }

    pub fn members(&self) -> &[String] {
        &self.members
    }

    pub fn config(&self) -> &WinnowConfig {
        &self.config
    }

    pub fn extraction(&self) -> &ExtractionConfig {
        &self.extraction
    }

    pub fn clouds(&self) -> &[Cloud] {
        &self.clouds
    }

    pub fn examples_seen(&self) -> u64 {
        self.t
    }

    pub fn member_seen(&self) -> &[u64] {
        &self.member_seen
    }

    pub fn feature(&self, attr: AttrId) -> &Feature {
        &self.vocab[attr as usize]
    }

    /// Ids of the features this model already knows, in feature order.
    pub fn known_ids(&self, features: &BTreeSet<Feature>) -> Vec<AttrId> {
        features
            .iter()
            .filter_map(|f| self.vocab.get_index_of(f).map(|i| i as AttrId))
            .collect()
    }

    pub fn intern(&mut self, features: &BTreeSet<Feature>) -> Vec<AttrId> {
        features
            .iter()
            .map(|f| match self.vocab.get_index_of(f) {
                Some(i) => i as AttrId,
                None => self.vocab.insert_full(f.clone()).0 as AttrId,
            })
            .collect()
    }

    /// True if training on this example would change any node.
    pub fn would_update(&self, active: &[AttrId], actual: usize) -> bool {
        self.clouds.iter().enumerate().any(|(c, cloud)| {
            let label = c == actual;
            cloud.nodes.iter().any(|n| n.predict(active) != label)
        })
    }

    /// One training example: positive for the clouds of `actual`, negative
    /// for all others. Returns whether anything changed.
    pub fn train_ids(&mut self, active: &[AttrId], actual: usize) -> bool {
        assert!(actual < self.members.len(), "member index out of range");
        if !self.would_update(active, actual) {
            return false;
        }
        let gamma = self.config.gamma.gamma(self.t);
        for (c, cloud) in self.clouds.iter_mut().enumerate() {
            let label = c == actual;
            let mut penalized = false;
            for (j, node) in cloud.nodes.iter_mut().enumerate() {
                if node.update(active, label) {
                    cloud.mistakes[j] += 1;
                    cloud.expert_weights[j] *= gamma;
                    penalized = true;
                }
            }
            if penalized {
                cloud.normalize_experts();
            }
        }
        self.t += 1;
        self.member_seen[actual] += 1;
        true
    }

    pub fn train_features(&mut self, active: &BTreeSet<Feature>, actual: usize) -> bool {
        let ids = self.intern(active);
        self.train_ids(&ids, actual)
    }

    pub fn cloud_scores(&self, active: &[AttrId]) -> Vec<f64> {
        self.clouds.iter().map(|c| c.score(active)).collect()
    }

    /// Highest cloud score; ties go to the member with more training
    /// examples, then the lower index.
    pub fn classify_ids(&self, active: &[AttrId]) -> usize {
        let scores = self.cloud_scores(active);
        let mut best = 0;
        for m in 1..scores.len() {
            if scores[m] > scores[best] || (scores[m] == scores[best] && self.member_seen[m] > self.member_seen[best]) {
                best = m;
            }
        }
        best
    }

    pub fn classify_features(&self, active: &BTreeSet<Feature>) -> usize {
        self.classify_ids(&self.known_ids(active))
    }

    /// Classifies from the full extracted context. Features the model never
    /// stored contribute nothing, so no feature-set filter is needed here.
    pub fn classify(&self, document: &Document, occurrence: &Occurrence) -> usize {
        self.classify_features(&extract_features(document, occurrence, &self.extraction))
    }

    pub(crate) fn restore(
        members: Vec<String>,
        config: WinnowConfig,
        extraction: ExtractionConfig,
        clouds: Vec<Cloud>,
        t: u64,
        member_seen: Vec<u64>,
        vocab: IndexSet<Feature>,
    ) -> Result<Self> {
        let mut model = Self::new(members, config, extraction)?;
        if clouds.len() != model.clouds.len()
            || member_seen.len() != model.members.len()
            || clouds.iter().any(|c| {
                c.nodes.len() != model.config.betas.len()
                    || c.expert_weights.len() != c.nodes.len()
                    || c.mistakes.len() != c.nodes.len()
                    || c.expert_weights.iter().any(|v| !(*v > 0.0))
            })
        {
            return Err(Error::InvalidArgument("cloud layout does not match the model header".into()));
        }
        model.clouds = clouds;
        model.t = t;
        model.member_seen = member_seen;
        model.vocab = vocab;
        Ok(model)
    }
}
