//! Line-oriented model files holding one independently loadable section per
//! confusion set.
//!
//! ```text
//! version=1
//! algorithm=bayes
//! confusion=weather|whether
//! ...
//! end
//! algorithm=winnows
//! ...
//! end
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so a
//! save→load→save cycle reproduces the file byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use indexmap::IndexSet;

use crate::bayes::{BayesConfig, BayesModel};
use crate::corpus::{ConfusionSet, Document, Occurrence};
use crate::error::{Error, Result};
use crate::features::{ExtractionConfig, Feature, FeatureSet, FeatureStats};
use crate::winnow::{Cloud, GammaSchedule, WinnowConfig, WinnowNode, WinnowParams, WinnowSModel};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Bayes,
    WinnowS,
}

impl Algorithm {
    pub fn key(self) -> &'static str {
        match self {
            Algorithm::Bayes => "bayes",
            Algorithm::WinnowS => "winnows",
        }
    }

    /// Column heading used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Bayes => "Bayes",
            Algorithm::WinnowS => "WinnowS",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bayes" => Ok(Algorithm::Bayes),
            "winnows" => Ok(Algorithm::WinnowS),
            _ => Err(Error::InvalidArgument(format!("unknown algorithm {s:?}"))),
        }
    }
}

/// A trained classifier for one confusion set.
#[derive(Debug, Clone, PartialEq)]
pub enum SetModel {
    Bayes(BayesModel),
    WinnowS(WinnowSModel),
}

impl SetModel {
    pub fn members(&self) -> &[String] {
        match self {
            SetModel::Bayes(m) => m.members(),
            SetModel::WinnowS(m) => m.members(),
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            SetModel::Bayes(_) => Algorithm::Bayes,
            SetModel::WinnowS(_) => Algorithm::WinnowS,
        }
    }

    pub fn confusion_set(&self) -> ConfusionSet {
        ConfusionSet::new(self.members()).expect("models always hold a valid confusion set")
    }

    pub fn classify(&self, document: &Document, occurrence: &Occurrence) -> usize {
        match self {
            SetModel::Bayes(m) => m.classify(document, occurrence),
            SetModel::WinnowS(m) => m.classify(document, occurrence),
        }
    }

    pub fn classify_features(&self, active: &BTreeSet<Feature>) -> usize {
        match self {
            SetModel::Bayes(m) => m.classify_features(active),
            SetModel::WinnowS(m) => m.classify_features(active),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModelFile {
    pub sections: Vec<SetModel>,
}

impl ModelFile {
    pub fn to_text(&self) -> String {
        let mut out = format!("version={FORMAT_VERSION}\n");
        for section in &self.sections {
            match section {
                SetModel::Bayes(m) => write_bayes(m, &mut out),
                SetModel::WinnowS(m) => write_winnows(m, &mut out),
            }
            out.push_str("end\n");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let version: u32 = lines.value("version")?.parse().map_err(|_| lines.error("bad version"))?;
        if version != FORMAT_VERSION {
            return Err(lines.error(&format!("unsupported model version {version}")));
        }
        let mut sections = Vec::new();
        while lines.peek().is_some() {
            let algorithm: Algorithm = lines.value("algorithm")?.parse().map_err(|e: Error| lines.error(&e.to_string()))?;
            let section = match algorithm {
                Algorithm::Bayes => SetModel::Bayes(read_bayes(&mut lines)?),
                Algorithm::WinnowS => SetModel::WinnowS(read_winnows(&mut lines)?),
            };
            lines.expect("end")?;
            sections.push(section);
        }
        Ok(Self { sections })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// The section for the set with these members, if any.
    pub fn section(&self, set: &ConfusionSet) -> Option<&SetModel> {
        self.sections.iter().find(|s| s.members() == set.members.as_slice())
    }
}

fn join<T: std::fmt::Debug>(values: &[T]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",")
}

fn write_extraction(e: &ExtractionConfig, out: &mut String) {
    let _ = writeln!(out, "k={}", e.window);
    let _ = writeln!(out, "l={}", e.max_collocation);
}

fn write_bayes(m: &BayesModel, out: &mut String) {
    let stats = m.features().stats();
    let _ = writeln!(out, "algorithm=bayes");
    let _ = writeln!(out, "confusion={}", m.members().join("|"));
    write_extraction(m.extraction(), out);
    let _ = writeln!(out, "kappa={:?}", m.config().kappa);
    let _ = writeln!(out, "resolve={}", m.config().resolve_dependencies);
    let _ = writeln!(out, "priors={}", join(&m.priors()));
    let _ = writeln!(out, "totals={}", join(stats.member_totals()));
    for (f, row) in stats.iter() {
        let _ = writeln!(out, "{f}\t{}", join(row));
    }
}

fn write_winnows(m: &WinnowSModel, out: &mut String) {
    let c = m.config();
    let _ = writeln!(out, "algorithm=winnows");
    let _ = writeln!(out, "confusion={}", m.members().join("|"));
    write_extraction(m.extraction(), out);
    let _ = writeln!(out, "gamma_min={:?}", c.gamma.min);
    let _ = writeln!(out, "gamma_T={:?}", c.gamma.horizon);
    let _ = writeln!(out, "epsilon={:?}", c.params.epsilon);
    let _ = writeln!(out, "theta={:?}", c.params.theta);
    let _ = writeln!(out, "alpha={:?}", c.params.alpha);
    let _ = writeln!(out, "sweep={}", c.params.sweep_interval);
    let _ = writeln!(out, "t={}", m.examples_seen());
    let _ = writeln!(out, "seen={}", join(m.member_seen()));
    for (member, cloud) in m.members().iter().zip(m.clouds()) {
        let _ = writeln!(out, "cloud {member}");
        for (j, node) in cloud.nodes.iter().enumerate() {
            let _ = writeln!(
                out,
                "node beta={:?} v={:?} m={} seen={} d={:?} pending={}",
                node.beta(),
                cloud.expert_weights[j],
                cloud.mistakes[j],
                node.seen(),
                node.d_estimate(),
                node.pending()
            );
            let mut lines: Vec<(String, f64)> = node.weights().map(|(a, w)| (m.feature(a).to_string(), w)).collect();
            lines.sort_by(|a, b| a.0.cmp(&b.0));
            for (dump, w) in lines {
                let _ = writeln!(out, "w\t{dump}\t{w:?}");
            }
        }
    }
}

struct Lines<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    line_no: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().enumerate().peekable(),
            line_no: 0,
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::parse("model file", self.line_no, message)
    }

    fn peek(&mut self) -> Option<&'a str> {
        self.lines.peek().map(|(_, l)| *l)
    }

    fn next(&mut self) -> Result<&'a str> {
        match self.lines.next() {
            Some((i, l)) => {
                self.line_no = i + 1;
                Ok(l)
            }
            None => Err(Error::parse("model file", self.line_no + 1, "unexpected end of file")),
        }
    }

    fn expect(&mut self, literal: &str) -> Result<()> {
        let line = self.next()?;
        if line == literal {
            Ok(())
        } else {
            Err(self.error(&format!("expected {literal:?}, found {line:?}")))
        }
    }

    fn value(&mut self, key: &str) -> Result<&'a str> {
        let line = self.next()?;
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| self.error(&format!("expected {key}=..., found {line:?}")))
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let raw = self.value(key)?;
        raw.parse().map_err(|_| self.error(&format!("bad value for {key}: {raw:?}")))
    }

    fn list<T: std::str::FromStr>(&mut self, key: &str) -> Result<Vec<T>> {
        let raw = self.value(key)?;
        raw.split(',')
            .map(|v| v.parse().map_err(|_| self.error(&format!("bad list entry for {key}: {v:?}"))))
            .collect()
    }
}

fn read_members(lines: &mut Lines<'_>) -> Result<Vec<String>> {
    let raw = lines.value("confusion")?;
    let members: Vec<&str> = raw.split('|').collect();
    ConfusionSet::new(&members)
        .map(|s| s.members)
        .map_err(|e| lines.error(&e.to_string()))
}

fn read_extraction(lines: &mut Lines<'_>) -> Result<ExtractionConfig> {
    let k = lines.parsed("k")?;
    let l = lines.parsed("l")?;
    ExtractionConfig::new(k, l).map_err(|e| lines.error(&e.to_string()))
}

fn split_feature_line<'a>(lines: &Lines<'_>, line: &'a str) -> Result<(Feature, &'a str)> {
    let (dump, value) = line.rsplit_once('\t').ok_or_else(|| lines.error("expected feature<TAB>value"))?;
    let feature = dump.parse::<Feature>().map_err(|e| lines.error(&e))?;
    Ok((feature, value))
}

fn read_bayes(lines: &mut Lines<'_>) -> Result<BayesModel> {
    let members = read_members(lines)?;
    let extraction = read_extraction(lines)?;
    let kappa: f64 = lines.parsed("kappa")?;
    let resolve: bool = lines.parsed("resolve")?;
    let _priors: Vec<f64> = lines.list("priors")?;
    let totals: Vec<u64> = lines.list("totals")?;
    let mut counts = BTreeMap::new();
    while let Some(line) = lines.peek() {
        if line == "end" {
            break;
        }
        let line = lines.next()?;
        let (feature, raw) = split_feature_line(lines, line)?;
        let row = raw
            .split(',')
            .map(|c| c.parse::<u64>().map_err(|_| lines.error("bad count")))
            .collect::<Result<Vec<_>>>()?;
        counts.insert(feature, row);
    }
    let stats = FeatureStats::from_parts(totals, counts).map_err(|e| lines.error(&e.to_string()))?;
    let config = BayesConfig {
        kappa,
        resolve_dependencies: resolve,
    };
    BayesModel::new(members, FeatureSet::unfiltered(stats), extraction, config).map_err(|e| lines.error(&e.to_string()))
}

fn node_field<'a, T: std::str::FromStr>(lines: &Lines<'_>, fields: &BTreeMap<&'a str, &'a str>, key: &str) -> Result<T> {
    fields
        .get(key)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| lines.error(&format!("node line missing or bad {key}")))
}

fn read_winnows(lines: &mut Lines<'_>) -> Result<WinnowSModel> {
    let members = read_members(lines)?;
    let extraction = read_extraction(lines)?;
    let gamma = GammaSchedule {
        min: lines.parsed("gamma_min")?,
        horizon: lines.parsed("gamma_T")?,
    };
    let epsilon = lines.parsed("epsilon")?;
    let theta = lines.parsed("theta")?;
    let alpha = lines.parsed("alpha")?;
    let sweep_interval = lines.parsed("sweep")?;
    let params = WinnowParams {
        theta,
        alpha,
        epsilon,
        sweep_interval,
    };
    let t: u64 = lines.parsed("t")?;
    let member_seen: Vec<u64> = lines.list("seen")?;

    let mut vocab: IndexSet<Feature> = IndexSet::new();
    let mut clouds = Vec::new();
    let mut betas: Option<Vec<f64>> = None;
    for member in &members {
        lines.expect(&format!("cloud {member}"))?;
        let mut nodes = Vec::new();
        let mut expert_weights = Vec::new();
        let mut mistakes = Vec::new();
        while lines.peek().is_some_and(|l| l.starts_with("node ")) {
            let line = lines.next()?;
            let fields: BTreeMap<&str, &str> = line["node ".len()..]
                .split(' ')
                .filter_map(|kv| kv.split_once('='))
                .collect();
            let beta: f64 = node_field(lines, &fields, "beta")?;
            expert_weights.push(node_field::<f64>(lines, &fields, "v")?);
            mistakes.push(node_field::<u64>(lines, &fields, "m")?);
            let seen = node_field(lines, &fields, "seen")?;
            let d = node_field(lines, &fields, "d")?;
            let pending = node_field(lines, &fields, "pending")?;
            let mut weights = Vec::new();
            while lines.peek().is_some_and(|l| l.starts_with("w\t")) {
                let line = lines.next()?;
                let (feature, raw) = split_feature_line(lines, &line[2..])?;
                let w: f64 = raw.parse().map_err(|_| lines.error("bad weight"))?;
                let id = vocab.insert_full(feature).0 as u32;
                weights.push((id, w));
            }
            nodes.push(WinnowNode::restore(beta, params, &weights, seen, d, pending).map_err(|e| lines.error(&e.to_string()))?);
        }
        let cloud_betas: Vec<f64> = nodes.iter().map(WinnowNode::beta).collect();
        match &betas {
            None => betas = Some(cloud_betas),
            Some(b) if *b == cloud_betas => {}
            Some(_) => return Err(lines.error("clouds disagree on their demotion rates")),
        }
        clouds.push(Cloud {
            nodes,
            expert_weights,
            mistakes,
        });
    }
    let config = WinnowConfig {
        params,
        gamma,
        betas: betas.unwrap_or_default(),
    };
    WinnowSModel::restore(members, config, extraction, clouds, t, member_seen, vocab).map_err(|e| lines.error(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::Element;

    fn bayes() -> BayesModel {
        let counts: BTreeMap<Feature, Vec<u64>> = [
            (Feature::ContextWord("cloudy".into()), vec![7, 1]),
            (
                Feature::collocation(1, vec![Element::Word("to".into()), Element::Tag("VERB".into())]),
                vec![0, 12],
            ),
        ]
        .into();
        let stats = FeatureStats::from_parts(vec![20, 30], counts).unwrap();
        BayesModel::new(
            vec!["weather".into(), "whether".into()],
            FeatureSet::unfiltered(stats),
            ExtractionConfig::default(),
            BayesConfig::default(),
        )
        .unwrap()
    }

    fn winnows() -> WinnowSModel {
        let mut m = WinnowSModel::new(vec!["to".into(), "too".into()], WinnowConfig::default(), ExtractionConfig::default()).unwrap();
        let a: BTreeSet<Feature> = [Feature::ContextWord("late".into()), Feature::ContextWord("go".into())].into();
        let b: BTreeSet<Feature> = [Feature::ContextWord("go".into()), Feature::ContextWord("store".into())].into();
        for i in 0..40 {
            m.train_features(if i % 3 == 0 { &a } else { &b }, (i % 3 == 0) as usize);
        }
        m
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let file = ModelFile {
            sections: vec![SetModel::Bayes(bayes()), SetModel::WinnowS(winnows())],
        };
        let text = file.to_text();
        let loaded = ModelFile::parse(&text).unwrap();
        assert_eq!(loaded.to_text(), text);
        assert_eq!(loaded.sections[0], file.sections[0]);
        assert!(text.contains("algorithm=bayes\nconfusion=weather|whether\n"));
        assert!(text.contains("priors=0.4,0.6\n"));
        assert!(text.contains("COLL\t1\tto,@VERB\t0,12\n"));
        assert!(text.contains("cloud too\nnode beta=0.5 v="));
    }

    #[test]
    fn loaded_winnows_predicts_identically() {
        let m = winnows();
        let text = ModelFile {
            sections: vec![SetModel::WinnowS(m.clone())],
        }
        .to_text();
        let loaded = ModelFile::parse(&text).unwrap();
        let SetModel::WinnowS(l) = &loaded.sections[0] else { panic!() };
        for words in [&["late"][..], &["go"], &["store", "late"], &["unknown"]] {
            let f: BTreeSet<Feature> = words.iter().map(|w| Feature::ContextWord(w.to_string())).collect();
            assert_eq!(l.classify_features(&f), m.classify_features(&f));
            assert_eq!(l.cloud_scores(&l.known_ids(&f)), m.cloud_scores(&m.known_ids(&f)));
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(ModelFile::parse("").is_err());
        assert!(ModelFile::parse("version=2\n").is_err());
        assert!(ModelFile::parse("version=1\nalgorithm=svm\n").is_err());
        let text = ModelFile {
            sections: vec![SetModel::Bayes(bayes())],
        }
        .to_text();
        assert!(ModelFile::parse(&text.replace("\nend\n", "\n")).is_err());
        assert!(ModelFile::parse(&text.replace("0,12", "0,x")).is_err());
        assert_eq!(ModelFile::parse("version=1\n").unwrap().sections.len(), 0);
    }
}
