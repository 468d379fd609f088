//! Context-word and collocation features, per-member co-occurrence
//! statistics, and the two pruning regimes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::corpus::{Document, Occurrence, Token};
use crate::error::{Error, Result};

/// Tag carried by the pseudo-token beyond either document edge.
pub const BOUNDARY_TAG: &str = "BOUNDARY";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Word(String),
    Tag(String),
}

impl Element {
    pub fn boundary() -> Self {
        Element::Tag(BOUNDARY_TAG.to_string())
    }

    /// Does this element accept `token`? `None` is the boundary pseudo-token.
    pub fn matches(&self, token: Option<&Token>) -> bool {
        match (self, token) {
            (Element::Word(w), Some(t)) => t.folded == *w,
            (Element::Tag(tag), Some(t)) => t.has_tag(tag),
            (Element::Tag(tag), None) => tag == BOUNDARY_TAG,
            (Element::Word(_), None) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Feature {
    /// A word somewhere within ±k tokens of the target.
    ContextWord(String),
    /// A contiguous pattern adjacent to the target. `offset` is the position
    /// of the first element relative to the target: `-len` for patterns
    /// ending just before it, `1` for patterns starting just after it.
    Collocation { offset: i32, elements: Vec<Element> },
}

impl Feature {
    pub fn collocation(offset: i32, elements: Vec<Element>) -> Self {
        Feature::Collocation { offset, elements }
    }

    pub fn is_collocation(&self) -> bool {
        matches!(self, Feature::Collocation { .. })
    }

    /// Relative positions covered by a collocation, as a half-open range.
    pub fn span(&self) -> Option<(i32, i32)> {
        match self {
            Feature::ContextWord(_) => None,
            Feature::Collocation { offset, elements } => Some((*offset, offset + elements.len() as i32)),
        }
    }

    pub fn pattern_len(&self) -> usize {
        match self {
            Feature::ContextWord(_) => 1,
            Feature::Collocation { elements, .. } => elements.len(),
        }
    }
}

fn escape_word(word: &str, out: &mut String) {
    for (i, c) in word.chars().enumerate() {
        match c {
            '\\' | ',' => {
                out.push('\\');
                out.push(c);
            }
            '@' if i == 0 => out.push_str("\\@"),
            _ => out.push(c),
        }
    }
}

/// Dump format: `CW<TAB>word` or `COLL<TAB>offset<TAB>elem[,elem...]`, tag
/// elements prefixed with `@`. Literal commas, backslashes and a leading `@`
/// are backslash-escaped.
impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::ContextWord(w) => write!(f, "CW\t{w}"),
            Feature::Collocation { offset, elements } => {
                let mut body = String::new();
                for (i, e) in elements.iter().enumerate() {
                    if i > 0 {
                        body.push(',');
                    }
                    match e {
                        Element::Tag(t) => {
                            body.push('@');
                            body.push_str(t);
                        }
                        Element::Word(w) => escape_word(w, &mut body),
                    }
                }
                write!(f, "COLL\t{offset}\t{body}")
            }
        }
    }
}

fn parse_elements(body: &str) -> std::result::Result<Vec<Element>, String> {
    let mut out = Vec::new();
    let mut text = String::new();
    let mut is_tag = false;
    let mut at_start = true;
    let mut chars = body.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                let next = chars.next().ok_or("dangling escape")?;
                text.push(next);
            }
            ',' => {
                out.push(finish_element(std::mem::take(&mut text), is_tag)?);
                is_tag = false;
                at_start = true;
                continue;
            }
            '@' if at_start => is_tag = true,
            _ => text.push(c),
        }
        at_start = false;
    }
    out.push(finish_element(text, is_tag)?);
    Ok(out)
}

fn finish_element(text: String, is_tag: bool) -> std::result::Result<Element, String> {
    if text.is_empty() {
        return Err("empty collocation element".into());
    }
    Ok(if is_tag {
        Element::Tag(text)
    } else {
        Element::Word(text)
    })
}

impl FromStr for Feature {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut parts = s.splitn(3, '\t');
        match (parts.next(), parts.next(), parts.next()) {
            (Some("CW"), Some(word), None) if !word.is_empty() => Ok(Feature::ContextWord(word.to_string())),
            (Some("COLL"), Some(offset), Some(body)) => {
                let offset: i32 = offset.parse().map_err(|_| format!("bad offset {offset:?}"))?;
                Ok(Feature::collocation(offset, parse_elements(body)?))
            }
            _ => Err(format!("unrecognized feature line {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractionConfig {
    /// Context-word half-window.
    pub window: usize,
    /// Maximum collocation length.
    pub max_collocation: usize,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            window: 10,
            max_collocation: 2,
        }
    }
}

impl ExtractionConfig {
    pub fn new(window: usize, max_collocation: usize) -> Result<Self> {
        if window == 0 || max_collocation == 0 {
            return Err(Error::InvalidArgument(
                "context window and collocation length must be at least 1".into(),
            ));
        }
        Ok(Self {
            window,
            max_collocation,
        })
    }
}

/// Every feature proposed by the context of `occurrence`.
pub fn extract_features(document: &Document, occurrence: &Occurrence, config: &ExtractionConfig) -> BTreeSet<Feature> {
    let tokens = document.tokens();
    let start = document.position(occurrence.sentence, occurrence.token);
    let end = start + occurrence.span;
    let mut out = BTreeSet::new();

    let lo = start.saturating_sub(config.window);
    let hi = (end + config.window).min(tokens.len());
    for tok in tokens[lo..start].iter().chain(&tokens[end..hi]) {
        if !tok.is_punct() {
            out.insert(Feature::ContextWord(tok.folded.clone()));
        }
    }

    let at = |pos: isize| -> Option<&Token> {
        if pos < 0 {
            None
        } else {
            tokens.get(pos as usize)
        }
    };
    for len in 1..=config.max_collocation {
        let before: Vec<Option<&Token>> = (0..len).map(|i| at(start as isize - len as isize + i as isize)).collect();
        let after: Vec<Option<&Token>> = (0..len).map(|i| at((end + i) as isize)).collect();
        expand_patterns(-(len as i32), &before, &mut out);
        expand_patterns(1, &after, &mut out);
    }
    out
}

fn element_choices(token: Option<&Token>) -> Vec<Element> {
    match token {
        None => vec![Element::boundary()],
        Some(t) => std::iter::once(Element::Word(t.folded.clone()))
            .chain(t.tags.iter().map(|tag| Element::Tag(tag.clone())))
            .collect(),
    }
}

fn expand_patterns(offset: i32, positions: &[Option<&Token>], out: &mut BTreeSet<Feature>) {
    let choices: Vec<Vec<Element>> = positions.iter().map(|t| element_choices(*t)).collect();
    let mut patterns: Vec<Vec<Element>> = vec![Vec::new()];
    for options in &choices {
        patterns = patterns
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |e| {
                    let mut next = prefix.clone();
                    next.push(e.clone());
                    next
                })
            })
            .collect();
    }
    out.extend(patterns.into_iter().map(|p| Feature::collocation(offset, p)));
}

/// Which label a training occurrence contributes under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelSource {
    Gold,
    /// The word as written; used for unsupervised training on test-domain text.
    Actual,
}

impl LabelSource {
    pub fn label(self, occurrence: &Occurrence) -> usize {
        match self {
            LabelSource::Gold => occurrence.gold,
            LabelSource::Actual => occurrence.actual,
        }
    }
}

/// Co-occurrence counts of features with each member word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureStats {
    member_totals: Vec<u64>,
    counts: BTreeMap<Feature, Vec<u64>>,
}

impl FeatureStats {
    pub fn new(members: usize) -> Self {
        Self {
            member_totals: vec![0; members],
            counts: BTreeMap::new(),
        }
    }

    /// Builds stats from raw parts. Fails if any count exceeds its member total.
    pub fn from_parts(member_totals: Vec<u64>, counts: BTreeMap<Feature, Vec<u64>>) -> Result<Self> {
        for (f, row) in &counts {
            if row.len() != member_totals.len() || row.iter().zip(&member_totals).any(|(c, n)| c > n) {
                return Err(Error::InvalidArgument(format!("inconsistent counts for feature {f}")));
            }
        }
        Ok(Self { member_totals, counts })
    }

    pub fn add(&mut self, features: &BTreeSet<Feature>, label: usize) {
        let members = self.member_totals.len();
        self.member_totals[label] += 1;
        for f in features {
            match self.counts.get_mut(f) {
                Some(row) => row[label] += 1,
                None => {
                    let mut row = vec![0; members];
                    row[label] = 1;
                    self.counts.insert(f.clone(), row);
                }
            }
        }
    }

    /// Adds another set of counts over a disjoint training set.
    pub fn merge(&mut self, other: &FeatureStats) {
        assert_eq!(self.members(), other.members(), "merging stats of different confusion sets");
        for (a, b) in self.member_totals.iter_mut().zip(&other.member_totals) {
            *a += b;
        }
        for (f, row) in &other.counts {
            let mine = self.counts.entry(f.clone()).or_insert_with(|| vec![0; row.len()]);
            for (a, b) in mine.iter_mut().zip(row) {
                *a += b;
            }
        }
    }

    pub fn members(&self) -> usize {
        self.member_totals.len()
    }

    pub fn member_totals(&self) -> &[u64] {
        &self.member_totals
    }

    pub fn total(&self) -> u64 {
        self.member_totals.iter().sum()
    }

    pub fn count(&self, feature: &Feature, member: usize) -> u64 {
        self.counts.get(feature).map_or(0, |row| row[member])
    }

    pub fn counts(&self, feature: &Feature) -> Option<&[u64]> {
        self.counts.get(feature).map(Vec::as_slice)
    }

    /// Number of training occurrences whose context matched `feature`.
    pub fn present(&self, feature: &Feature) -> u64 {
        self.counts.get(feature).map_or(0, |row| row.iter().sum())
    }

    /// Per-member `[present, absent]` table for `feature`.
    pub fn contingency(&self, feature: &Feature) -> Vec<[u64; 2]> {
        (0..self.members())
            .map(|m| {
                let c = self.count(feature, m);
                [c, self.member_totals[m] - c]
            })
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Feature, &[u64])> + '_ {
        self.counts.iter().map(|(f, row)| (f, row.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    fn filtered(&self, keep: impl Fn(&Feature, &[u64]) -> bool) -> FeatureSet {
        FeatureSet {
            stats: FeatureStats {
                member_totals: self.member_totals.clone(),
                counts: self
                    .counts
                    .iter()
                    .filter(|(f, row)| keep(f, row))
                    .map(|(f, row)| (f.clone(), row.clone()))
                    .collect(),
            },
        }
    }
}

/// Tallies feature/member co-occurrences over a training set.
pub fn collect_stats(
    documents: &[Document],
    occurrences: &[Occurrence],
    members: usize,
    config: &ExtractionConfig,
    labels: LabelSource,
) -> Result<FeatureStats> {
    if occurrences.is_empty() {
        return Err(Error::Empty("no training occurrences"));
    }
    let mut stats = FeatureStats::new(members);
    for occ in occurrences {
        let features = extract_features(&documents[occ.doc], occ, config);
        stats.add(&features, labels.label(occ));
    }
    Ok(stats)
}

/// Pearson's statistic on an n×2 table, without continuity correction.
/// Cells whose expected count is zero contribute nothing.
pub fn chi_square(table: &[[u64; 2]]) -> Result<f64> {
    let total: u64 = table.iter().flatten().sum();
    if total == 0 {
        return Err(Error::Empty("chi-square table with zero total"));
    }
    let total = total as f64;
    let cols = [0, 1].map(|j| table.iter().map(|row| row[j]).sum::<u64>() as f64);
    let mut stat = 0.0;
    for row in table {
        let row_total = (row[0] + row[1]) as f64;
        for j in 0..2 {
            let expected = row_total * cols[j] / total;
            if expected > 0.0 {
                let d = row[j] as f64 - expected;
                stat += d * d / expected;
            }
        }
    }
    Ok(stat)
}

const CRITICAL_05: [f64; 9] = [3.8415, 5.9915, 7.8147, 9.4877, 11.0705, 12.5916, 14.0671, 15.5073, 16.9190];

/// Upper 5% point of the chi-square distribution with `df` degrees of freedom.
/// Tabulated through df=9; larger df use the Wilson–Hilferty approximation.
pub fn critical_value_05(df: usize) -> f64 {
    assert!(df >= 1, "chi-square needs at least one degree of freedom");
    if let Some(v) = CRITICAL_05.get(df - 1) {
        return *v;
    }
    let k = df as f64;
    let z = 1.644_853_626_951_472_2;
    let h = 2.0 / (9.0 * k);
    k * (1.0 - h + z * h.sqrt()).powi(3)
}

/// Minimum presence and absence counts a feature needs under Bayes pruning.
pub const MIN_PRESENT: u64 = 10;
pub const MIN_ABSENT: u64 = 10;

/// The features retained after pruning, with their training counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSet {
    stats: FeatureStats,
}

impl FeatureSet {
    pub fn stats(&self) -> &FeatureStats {
        &self.stats
    }

    pub fn into_stats(self) -> FeatureStats {
        self.stats
    }

    /// Treats every feature in `stats` as retained.
    pub fn unfiltered(stats: FeatureStats) -> Self {
        Self { stats }
    }

    pub fn contains(&self, feature: &Feature) -> bool {
        self.stats.counts.contains_key(feature)
    }

    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }

    pub fn features(&self) -> impl Iterator<Item = &Feature> + '_ {
        self.stats.counts.keys()
    }
}

/// Keeps a feature iff it occurs at least 10 times, is absent at least 10
/// times, and its presence is correlated with the member at the 0.05 level.
pub fn prune_bayes(stats: &FeatureStats) -> FeatureSet {
    let total = stats.total();
    let critical = critical_value_05(stats.members().max(2) - 1);
    stats.filtered(|f, row| {
        let present: u64 = row.iter().sum();
        present >= MIN_PRESENT
            && total - present >= MIN_ABSENT
            && chi_square(&stats.contingency(f)).is_ok_and(|x| x >= critical)
    })
}

/// Drops only features seen exactly once in training.
pub fn prune_minimal(stats: &FeatureStats) -> FeatureSet {
    stats.filtered(|_, row| row.iter().sum::<u64>() >= 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pruning {
    /// Count thresholds plus chi-square significance.
    Pruned,
    /// Only singletons removed.
    Unpruned,
}

impl Pruning {
    pub fn apply(self, stats: &FeatureStats) -> FeatureSet {
        match self {
            Pruning::Pruned => prune_bayes(stats),
            Pruning::Unpruned => prune_minimal(stats),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pruning::Pruned => "pruned",
            Pruning::Unpruned => "unpruned",
        }
    }
}

impl FromStr for Pruning {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pruned" => Ok(Pruning::Pruned),
            "unpruned" => Ok(Pruning::Unpruned),
            _ => Err(Error::InvalidArgument(format!("unknown pruning regime {s:?}"))),
        }
    }
}

/// Features of `occurrence` that survive in `set`.
pub fn match_features(
    document: &Document,
    occurrence: &Occurrence,
    set: &FeatureSet,
    config: &ExtractionConfig,
) -> BTreeSet<Feature> {
    extract_features(document, occurrence, config)
        .into_iter()
        .filter(|f| set.contains(f))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{tokenize, ConfusionSet, TagDictionary};

    fn word(w: &str) -> Element {
        Element::Word(w.into())
    }

    fn tag(t: &str) -> Element {
        Element::Tag(t.into())
    }

    fn features_of(text: &str, dict: &TagDictionary, set: &[&str], config: ExtractionConfig) -> BTreeSet<Feature> {
        let doc = tokenize(text, dict);
        let set = ConfusionSet::new(set).unwrap();
        let occ = set.find_occurrences(0, &doc);
        extract_features(&doc, &occ[0], &config)
    }

    #[test]
    fn to_verb_after_whether() {
        let dict = TagDictionary::parse("to\tPREP\nlaugh\tVERB,NOUN\n").unwrap();
        let f = features_of(
            "I don't know whether to laugh or cry",
            &dict,
            &["weather", "whether"],
            ExtractionConfig::default(),
        );
        assert!(f.contains(&Feature::collocation(1, vec![word("to"), tag("VERB")])));
        assert!(f.contains(&Feature::collocation(-1, vec![word("know")])));
        assert!(f.contains(&Feature::ContextWord("cry".into())));
        assert!(!f.contains(&Feature::ContextWord("whether".into())));
    }

    #[test]
    fn context_word_seven_away() {
        let f = features_of(
            "the weather a b c d e f cloudy",
            &TagDictionary::new(),
            &["weather", "whether"],
            ExtractionConfig::default(),
        );
        assert!(f.contains(&Feature::ContextWord("cloudy".into())));
        let narrow = features_of(
            "the weather a b c d e f cloudy",
            &TagDictionary::new(),
            &["weather", "whether"],
            ExtractionConfig::new(6, 2).unwrap(),
        );
        assert!(!narrow.contains(&Feature::ContextWord("cloudy".into())));
    }

    #[test]
    fn boundary_at_document_start() {
        let f = features_of("weather is nice", &TagDictionary::new(), &["weather", "whether"], ExtractionConfig::default());
        let pre1: Vec<_> = f.iter().filter(|f| f.span() == Some((-1, 0))).collect();
        assert_eq!(pre1, vec![&Feature::collocation(-1, vec![Element::boundary()])]);
        assert!(f.contains(&Feature::collocation(-2, vec![Element::boundary(), Element::boundary()])));
    }

    #[test]
    fn punctuation_occupies_window_but_is_not_a_context_word() {
        let f = features_of("a , weather", &TagDictionary::new(), &["weather", "whether"], ExtractionConfig::new(1, 1).unwrap());
        assert!(!f.iter().any(|f| matches!(f, Feature::ContextWord(_))));
        assert!(f.contains(&Feature::collocation(-1, vec![tag("PUNCT")])));
        assert!(f.contains(&Feature::collocation(-1, vec![word(",")])));
    }

    #[test]
    fn multi_word_target_is_excluded() {
        let f = features_of("it may be so", &TagDictionary::new(), &["maybe", "may be"], ExtractionConfig::default());
        assert!(!f.contains(&Feature::ContextWord("may".into())));
        assert!(!f.contains(&Feature::ContextWord("be".into())));
        assert!(f.contains(&Feature::collocation(1, vec![word("so")])));
        assert!(f.contains(&Feature::collocation(-1, vec![word("it")])));
    }

    #[test]
    fn dump_format_round_trip() {
        let features = [
            Feature::ContextWord("cloudy".into()),
            Feature::collocation(1, vec![word("to"), tag("VERB")]),
            Feature::collocation(-2, vec![Element::boundary(), word(",")]),
            Feature::collocation(-1, vec![word("@home")]),
            Feature::collocation(-1, vec![word("a\\b")]),
        ];
        assert_eq!(features[1].to_string(), "COLL\t1\tto,@VERB");
        assert_eq!(features[2].to_string(), "COLL\t-2\t@BOUNDARY,\\,");
        for f in &features {
            assert_eq!(&f.to_string().parse::<Feature>().unwrap(), f);
        }
        assert!("COLL\tx\ta".parse::<Feature>().is_err());
        assert!("XX\ta".parse::<Feature>().is_err());
    }

    fn stats_with(rows: &[(&str, &[u64])], totals: &[u64]) -> FeatureStats {
        FeatureStats::from_parts(
            totals.to_vec(),
            rows.iter().map(|(w, r)| (Feature::ContextWord(w.to_string()), r.to_vec())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn chi_square_examples() {
        assert_eq!(chi_square(&[[10, 10], [10, 10]]).unwrap(), 0.0);
        let x = chi_square(&[[10, 20], [30, 40]]).unwrap();
        // E = 12, 18, 28, 42
        let expect = 4.0 / 12.0 + 4.0 / 18.0 + 4.0 / 28.0 + 4.0 / 42.0;
        assert!((x - expect).abs() < 1e-12);
        assert!((x - 0.7937).abs() < 1e-4);
        let with_zero_row = chi_square(&[[10, 20], [0, 0], [30, 40]]).unwrap();
        assert!((with_zero_row - x).abs() < 1e-12);
        assert!(chi_square(&[[0, 0], [0, 0]]).is_err());
    }

    #[test]
    fn critical_values() {
        assert_eq!(critical_value_05(1), 3.8415);
        assert_eq!(critical_value_05(2), 5.9915);
        assert_eq!(critical_value_05(9), 16.9190);
        // Wilson-Hilferty lands close to the tabulated value at df=10 (18.307).
        assert!((critical_value_05(10) - 18.307).abs() < 0.02);
    }

    #[test]
    fn bayes_pruning_thresholds() {
        let stats = stats_with(
            &[
                ("rare", &[4, 5]),
                ("ubiquitous", &[98, 97]),
                ("decisive", &[30, 70]),
                ("flat", &[50, 50]),
            ],
            &[100, 100],
        );
        let kept: Vec<_> = prune_bayes(&stats).features().cloned().collect();
        assert_eq!(kept, vec![Feature::ContextWord("decisive".into())]);
        let chi = chi_square(&stats.contingency(&Feature::ContextWord("decisive".into()))).unwrap();
        assert!((chi - 32.0).abs() < 1e-12);
    }

    #[test]
    fn minimal_pruning_boundary() {
        let stats = stats_with(&[("once", &[1, 0]), ("twice", &[1, 1])], &[5, 5]);
        let kept: Vec<_> = prune_minimal(&stats).features().cloned().collect();
        assert_eq!(kept, vec![Feature::ContextWord("twice".into())]);
    }

    #[test]
    fn stats_count_and_merge() {
        let mut a = FeatureStats::new(2);
        let f: BTreeSet<_> = [Feature::ContextWord("x".into())].into();
        let none = BTreeSet::new();
        for i in 0..10 {
            a.add(if i < 4 { &f } else { &none }, 0);
        }
        assert_eq!(a.count(&Feature::ContextWord("x".into()), 0), 4);
        assert_eq!(a.count(&Feature::ContextWord("x".into()), 1), 0);
        let mut b = FeatureStats::new(2);
        b.add(&f, 1);
        let mut ab = a.clone();
        ab.merge(&b);
        assert_eq!(ab.counts(&Feature::ContextWord("x".into())).unwrap(), &[4, 1]);
        assert_eq!(ab.member_totals(), &[10, 1]);
    }

    #[test]
    fn collect_stats_rejects_empty() {
        assert!(collect_stats(&[], &[], 2, &ExtractionConfig::default(), LabelSource::Gold).is_err());
    }

    #[test]
    fn match_with_empty_and_full_sets() {
        let doc = tokenize("the weather is fine", &TagDictionary::new());
        let set = ConfusionSet::new(&["weather", "whether"]).unwrap();
        let occ = set.find_occurrences(0, &doc)[0];
        let config = ExtractionConfig::default();
        let empty = FeatureSet::unfiltered(FeatureStats::new(2));
        assert!(match_features(&doc, &occ, &empty, &config).is_empty());
        let mut stats = FeatureStats::new(2);
        let all = extract_features(&doc, &occ, &config);
        stats.add(&all, 0);
        let full = FeatureSet::unfiltered(stats);
        assert_eq!(match_features(&doc, &occ, &full, &config), all);
    }
}
