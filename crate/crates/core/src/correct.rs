//! End-user correction: flag confusion-set words the models disagree with.

use std::collections::BTreeSet;

use crate::corpus::{tokenize_with, SentenceMode, TagDictionary};
use crate::model::ModelFile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    /// 1-based line of the written word.
    pub line: usize,
    /// 1-based character column within that line.
    pub column: usize,
    pub written: String,
    pub suggested: String,
    /// Byte range of the written word in the input.
    pub start: usize,
    pub end: usize,
}

impl Correction {
    pub fn record(&self) -> String {
        format!("{}\t{}\t{}\t{}", self.line, self.column, self.written, self.suggested)
    }
}

/// Copies the leading capital of `written` onto `word`.
pub fn match_case(written: &str, word: &str) -> String {
    let leading_upper = written.chars().next().is_some_and(char::is_uppercase);
    let mut chars = word.chars();
    match chars.next() {
        Some(first) if leading_upper => first.to_uppercase().chain(chars).collect(),
        _ => word.to_string(),
    }
}

/// Corrections for `text`, ordered by position. Sections are applied in
/// order of confusion-set id and each token is corrected at most once.
pub fn find_corrections(text: &str, dict: &TagDictionary, mode: SentenceMode, models: &ModelFile) -> Vec<Correction> {
    let doc = tokenize_with("input", text, dict, mode);
    let mut sections: Vec<_> = models.sections.iter().map(|m| (m.confusion_set(), m)).collect();
    sections.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    let mut claimed = BTreeSet::new();
    let mut out = Vec::new();
    for (set, model) in sections {
        for occ in set.find_occurrences(0, &doc) {
            let first = doc.position(occ.sentence, occ.token);
            let positions: Vec<usize> = (first..first + occ.span).collect();
            if positions.iter().any(|p| claimed.contains(p)) {
                continue;
            }
            let predicted = model.classify(&doc, &occ);
            if predicted == occ.actual {
                continue;
            }
            let tokens = doc.tokens();
            let (start, end) = (tokens[first].start, tokens[first + occ.span - 1].end);
            let written = text[start..end].to_string();
            let line_start = text[..start].rfind('\n').map_or(0, |i| i + 1);
            out.push(Correction {
                line: text[..start].matches('\n').count() + 1,
                column: text[line_start..start].chars().count() + 1,
                suggested: match_case(&written, &set.members[predicted]),
                written,
                start,
                end,
            });
            claimed.extend(positions);
        }
    }
    out.sort_by_key(|c| c.start);
    out
}

/// Rewrites each corrected span; everything else is copied byte for byte.
pub fn apply_corrections(text: &str, corrections: &[Correction]) -> String {
    let mut sorted: Vec<&Correction> = corrections.iter().collect();
    sorted.sort_by_key(|c| c.start);
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for c in sorted {
        out.push_str(&text[cursor..c.start]);
        out.push_str(&c.suggested);
        cursor = c.end;
    }
    out.push_str(&text[cursor..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn casing() {
        assert_eq!(match_case("To", "too"), "Too");
        assert_eq!(match_case("to", "too"), "too");
        assert_eq!(match_case("TO", "too"), "Too");
    }

    #[test]
    fn apply_rewrites_only_spans() {
        let text = "a to b\nc to d";
        let c = Correction {
            line: 2,
            column: 3,
            written: "to".into(),
            suggested: "too".into(),
            start: 9,
            end: 11,
        };
        assert_eq!(apply_corrections(text, &[c]), "a to b\nc too d");
        assert_eq!(apply_corrections(text, &[]), text);
    }

    #[test]
    fn empty_model_file_corrects_nothing() {
        let text = "It's not to late.";
        let found = find_corrections(text, &TagDictionary::new(), SentenceMode::Heuristic, &ModelFile::default());
        assert!(found.is_empty());
    }
}
