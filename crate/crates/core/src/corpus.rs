//! Corpus ingestion: tokenization, tag dictionaries, confusion sets, and the
//! occurrence lists that both learners train and test on.
//!
//! Occurrences carry two labels. `actual` is the member as written in the
//! text, `gold` is the member the writer intended. They only differ after
//! [`corrupt`] has simulated typing errors.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const PUNCT_TAG: &str = "PUNCT";
pub const UNKNOWN_TAG: &str = "UNK";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub folded: String,
    /// Sorted, deduplicated, never empty.
    pub tags: Vec<String>,
    /// Byte range of the surface form in the source text.
    pub start: usize,
    pub end: usize,
}

impl Token {
    pub fn is_punct(&self) -> bool {
        self.tags.len() == 1 && self.tags[0] == PUNCT_TAG
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.binary_search_by(|t| t.as_str().cmp(tag)).is_ok()
    }
}

/// Maps lowercased words to their set of possible part-of-speech tags.
#[derive(Debug, Clone, Default)]
pub struct TagDictionary {
    entries: HashMap<String, Vec<String>>,
}

impl TagDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `word<TAB>tag[,tag...]` lines. Blank lines and lines starting
    /// with `#` are ignored; repeated words merge their tag sets.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dict = Self::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, tags) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse("tag dictionary", idx + 1, "expected word<TAB>tags"))?;
            let tags: Vec<&str> = tags.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
            if word.trim().is_empty() || tags.is_empty() {
                return Err(Error::parse("tag dictionary", idx + 1, "empty word or tag list"));
            }
            dict.insert(word.trim(), tags);
        }
        Ok(dict)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn insert<S: AsRef<str>>(&mut self, word: &str, tags: impl IntoIterator<Item = S>) {
        let entry = self.entries.entry(word.to_lowercase()).or_default();
        for tag in tags {
            entry.push(tag.as_ref().to_string());
        }
        entry.sort();
        entry.dedup();
    }

    /// Tag set for a folded word; unknown words get `{UNK}`.
    pub fn tags(&self, folded: &str) -> Vec<String> {
        match self.entries.get(folded) {
            Some(tags) => tags.clone(),
            None => vec![UNKNOWN_TAG.to_string()],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// How sentence boundaries are found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SentenceMode {
    /// Boundary after `.`, `!` or `?` followed by whitespace and a capital.
    #[default]
    Heuristic,
    /// Every non-blank line is one sentence.
    PerLine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    tokens: Vec<Token>,
    sentence_starts: Vec<usize>,
}

impl Document {
    pub fn new(id: impl Into<String>, sentences: Vec<Vec<Token>>) -> Self {
        let mut tokens = Vec::new();
        let mut sentence_starts = Vec::new();
        for sentence in sentences.into_iter().filter(|s| !s.is_empty()) {
            sentence_starts.push(tokens.len());
            tokens.extend(sentence);
        }
        Self {
            id: id.into(),
            tokens,
            sentence_starts,
        }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn num_sentences(&self) -> usize {
        self.sentence_starts.len()
    }

    pub fn sentence(&self, index: usize) -> &[Token] {
        let start = self.sentence_starts[index];
        let end = self
            .sentence_starts
            .get(index + 1)
            .copied()
            .unwrap_or(self.tokens.len());
        &self.tokens[start..end]
    }

    pub fn sentences(&self) -> impl Iterator<Item = &[Token]> + '_ {
        (0..self.num_sentences()).map(move |i| self.sentence(i))
    }

    /// Flat token position of `(sentence, token)` within the document.
    pub fn position(&self, sentence: usize, token: usize) -> usize {
        self.sentence_starts[sentence] + token
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Self {
        Self { documents }
    }

    pub fn from_text(id: &str, text: &str, dict: &TagDictionary, mode: SentenceMode) -> Self {
        Self::new(vec![tokenize_with(id, text, dict, mode)])
    }

    /// Loads a corpus file, or every file of a directory (sorted by name,
    /// one document per file).
    pub fn from_path(path: impl AsRef<Path>, dict: &TagDictionary, mode: SentenceMode) -> Result<Self> {
        let path = path.as_ref();
        let mut files = Vec::new();
        if path.is_dir() {
            for entry in fs::read_dir(path).map_err(|e| Error::io(path, e))? {
                let entry = entry.map_err(|e| Error::io(path, e))?;
                if entry.path().is_file() {
                    files.push(entry.path());
                }
            }
            files.sort();
        } else {
            files.push(path.to_path_buf());
        }
        let mut documents = Vec::with_capacity(files.len());
        for file in files {
            let text = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
            documents.push(tokenize_with(&file.display().to_string(), &text, dict, mode));
        }
        Ok(Self::new(documents))
    }

    pub fn token_count(&self) -> usize {
        self.documents.iter().map(|d| d.tokens.len()).sum()
    }
}

/// Tokenizes free text with the sentence-boundary heuristic.
pub fn tokenize(text: &str, dict: &TagDictionary) -> Document {
    tokenize_with("", text, dict, SentenceMode::Heuristic)
}

pub fn tokenize_with(id: &str, text: &str, dict: &TagDictionary, mode: SentenceMode) -> Document {
    match mode {
        SentenceMode::Heuristic => {
            let chunks = chunks(text, 0);
            Document::new(id, split_sentences(&chunks, dict))
        }
        SentenceMode::PerLine => {
            let mut sentences = Vec::new();
            let mut offset = 0;
            for line in text.split_inclusive('\n') {
                let chunks = chunks(line, offset);
                sentences.push(chunks.iter().flat_map(|c| c.tokens(dict)).collect());
                offset += line.len();
            }
            Document::new(id, sentences)
        }
    }
}

/// A whitespace-delimited run of text, split into leading punctuation, a
/// word core, and trailing punctuation.
struct Chunk<'a> {
    text: &'a str,
    start: usize,
}

impl Chunk<'_> {
    fn core_range(&self) -> (usize, usize) {
        let lead = self
            .text
            .char_indices()
            .find(|(_, c)| c.is_alphanumeric())
            .map(|(i, _)| i);
        match lead {
            None => (self.text.len(), self.text.len()),
            Some(lo) => {
                let hi = self
                    .text
                    .char_indices()
                    .rev()
                    .find(|(_, c)| c.is_alphanumeric())
                    .map(|(i, c)| i + c.len_utf8())
                    .unwrap_or(lo);
                (lo, hi)
            }
        }
    }

    fn tokens(&self, dict: &TagDictionary) -> Vec<Token> {
        let (lo, hi) = self.core_range();
        let mut out = Vec::new();
        let punct = |s: &str, base: usize, out: &mut Vec<Token>| {
            for (i, c) in s.char_indices() {
                let surface = c.to_string();
                out.push(Token {
                    folded: surface.clone(),
                    surface,
                    tags: vec![PUNCT_TAG.to_string()],
                    start: base + i,
                    end: base + i + c.len_utf8(),
                });
            }
        };
        punct(&self.text[..lo], self.start, &mut out);
        if lo < hi {
            let surface = self.text[lo..hi].to_string();
            let folded = surface.to_lowercase();
            out.push(Token {
                tags: dict.tags(&folded),
                surface,
                folded,
                start: self.start + lo,
                end: self.start + hi,
            });
        }
        punct(&self.text[hi.max(lo)..], self.start + hi.max(lo), &mut out);
        out
    }

    fn ends_sentence(&self) -> bool {
        let (lo, hi) = self.core_range();
        let trailing = if lo < hi { &self.text[hi..] } else { self.text };
        trailing.contains(['.', '!', '?'])
    }

    fn starts_capitalized(&self) -> bool {
        self.text
            .chars()
            .find(|c| c.is_alphanumeric())
            .is_some_and(char::is_uppercase)
    }
}

fn chunks(text: &str, base: usize) -> Vec<Chunk<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Chunk {
                    text: &text[s..i],
                    start: base + s,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Chunk {
            text: &text[s..],
            start: base + s,
        });
    }
    out
}

fn split_sentences(chunks: &[Chunk<'_>], dict: &TagDictionary) -> Vec<Vec<Token>> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    for (i, chunk) in chunks.iter().enumerate() {
        current.extend(chunk.tokens(dict));
        let boundary = chunk.ends_sentence()
            && chunks.get(i + 1).is_none_or(Chunk::starts_capitalized);
        if boundary && !current.is_empty() {
            sentences.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    sentences
}

/// A group of words that are mutually mistakable for one another.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfusionSet {
    pub id: String,
    pub members: Vec<String>,
}

impl ConfusionSet {
    pub fn new<S: AsRef<str>>(members: &[S]) -> Result<Self> {
        let members: Vec<String> = members
            .iter()
            .map(|m| m.as_ref().split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase())
            .collect();
        if members.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a confusion set needs at least two members, got {members:?}"
            )));
        }
        if members.iter().any(String::is_empty) {
            return Err(Error::InvalidArgument("empty confusion-set member".into()));
        }
        let distinct: BTreeSet<&String> = members.iter().collect();
        if distinct.len() != members.len() {
            return Err(Error::InvalidArgument(format!(
                "confusion-set members must be distinct: {members:?}"
            )));
        }
        Ok(Self {
            id: members.join(", "),
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member_index(&self, word: &str) -> Option<usize> {
        let word = word.to_lowercase();
        self.members.iter().position(|m| *m == word)
    }

    /// Parses one set per line, members separated by `|`.
    pub fn parse_list(text: &str) -> Result<Vec<Self>> {
        let mut sets = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let members: Vec<&str> = line.split('|').map(str::trim).collect();
            let set = Self::new(&members)
                .map_err(|e| Error::parse("confusion sets", idx + 1, e.to_string()))?;
            sets.push(set);
        }
        Ok(sets)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Vec<Self>> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_list(&text)
    }

    /// Every occurrence of a member in one document.
    pub fn find_occurrences(&self, doc_index: usize, document: &Document) -> Vec<Occurrence> {
        let patterns: Vec<Vec<&str>> = self
            .members
            .iter()
            .map(|m| m.split(' ').collect())
            .collect();
        let mut out = Vec::new();
        for (s, sentence) in document.sentences().enumerate() {
            let mut i = 0;
            while i < sentence.len() {
                // Longest matching member wins.
                let hit = patterns
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| {
                        i + p.len() <= sentence.len()
                            && p.iter().zip(&sentence[i..]).all(|(w, t)| t.folded == *w)
                    })
                    .max_by_key(|(m, p)| (p.len(), std::cmp::Reverse(*m)));
                match hit {
                    Some((member, pattern)) => {
                        out.push(Occurrence {
                            doc: doc_index,
                            sentence: s,
                            token: i,
                            span: pattern.len(),
                            actual: member,
                            gold: member,
                        });
                        i += pattern.len();
                    }
                    None => i += 1,
                }
            }
        }
        out
    }

    pub fn occurrences(&self, corpus: &Corpus) -> Vec<Occurrence> {
        corpus
            .documents
            .iter()
            .enumerate()
            .flat_map(|(d, doc)| self.find_occurrences(d, doc))
            .collect()
    }
}

/// One appearance of a confusion-set member, addressed by document index,
/// sentence index and token index within the sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub doc: usize,
    pub sentence: usize,
    pub token: usize,
    /// Number of tokens the member spans (2 for "may be").
    pub span: usize,
    pub actual: usize,
    pub gold: usize,
}

impl Occurrence {
    pub fn sentence_key(&self) -> (usize, usize) {
        (self.doc, self.sentence)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<Occurrence>,
    pub test: Vec<Occurrence>,
    pub seed: u64,
}

/// Random split by sentence: no sentence contributes to both sides.
pub fn split_by_sentence(occurrences: &[Occurrence], train_fraction: f64, seed: u64) -> Result<Split> {
    if !(0.0..=1.0).contains(&train_fraction) {
        return Err(Error::InvalidArgument(format!(
            "train fraction must lie in [0, 1], got {train_fraction}"
        )));
    }
    let mut keys: Vec<(usize, usize)> = occurrences
        .iter()
        .map(Occurrence::sentence_key)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    keys.shuffle(&mut rng);
    let n_train = (train_fraction * keys.len() as f64 + 1e-9).floor() as usize;
    let train_keys: BTreeSet<_> = keys[..n_train].iter().copied().collect();
    let (train, test) = occurrences
        .iter()
        .partition(|o| train_keys.contains(&o.sentence_key()));
    Ok(Split { train, test, seed })
}

/// Number of occurrences altered by [`corrupt`] at `percent` of `n`.
pub fn corruption_count(n: usize, percent: f64) -> usize {
    ((percent * n as f64) / 100.0 + 1e-9).floor() as usize
}

/// Rewrites `⌊percent·N/100⌋` randomly chosen occurrences to a different
/// member of the set, keeping `gold` intact.
///
/// The chosen occurrences are a prefix of one seeded permutation, so for a
/// fixed seed the altered set at a lower percentage is contained in the
/// altered set at a higher one.
pub fn corrupt(
    occurrences: &[Occurrence],
    set_size: usize,
    percent: f64,
    seed: u64,
) -> Result<Vec<Occurrence>> {
    if !(0.0..=100.0).contains(&percent) {
        return Err(Error::InvalidArgument(format!(
            "corruption percent must lie in [0, 100], got {percent}"
        )));
    }
    if set_size < 2 {
        return Err(Error::InvalidArgument("corruption needs at least two members".into()));
    }
    let mut out = occurrences.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..out.len()).collect();
    order.shuffle(&mut rng);
    for &i in &order[..corruption_count(out.len(), percent)] {
        let occ = &mut out[i];
        let pick = rng.random_range(0..set_size - 1);
        occ.actual = if pick >= occ.actual { pick + 1 } else { pick };
    }
    Ok(out)
}
