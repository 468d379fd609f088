#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ctxspell::corpus::{tokenize_with, ConfusionSet, Corpus, SentenceMode, TagDictionary};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One document per sentence, so context windows never leak across
/// sentences.
pub fn corpus_of(sentences: &[String], dict: &TagDictionary) -> Corpus {
    Corpus::new(
        sentences
            .iter()
            .enumerate()
            .map(|(i, s)| tokenize_with(&format!("s{i}"), s, dict, SentenceMode::PerLine))
            .collect(),
    )
}

pub fn pick<'a, R: Rng>(rng: &mut R, words: &'a [String]) -> &'a str {
    &words[rng.random_range(0..words.len())]
}

pub fn words(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn sentence(parts: &[&str]) -> String {
    let mut s = parts.join(" ");
    s.push_str(" .");
    s
}

pub fn weather_set() -> ConfusionSet {
    ConfusionSet::new(&["weather", "whether"]).unwrap()
}

pub fn dictionary() -> TagDictionary {
    TagDictionary::parse("the\tDET\na\tDET\nto\tTO PREP\nshe\tPRON\nhe\tPRON\nit\tPRON\nwas\tVERB\nis\tVERB\n").unwrap()
}

/// A learnable two-member text: each sentence carries a member-specific
/// neighbour, a member-leaning context word and random filler.
pub fn weather_text(seed: u64, n: usize) -> String {
    let mut r = rng(seed);
    let filler = words("w", 150);
    let mut lines = Vec::with_capacity(n);
    for _ in 0..n {
        let (pre, target, post, ctx) = if r.random_bool(0.5) {
            (
                ["the", "rainy", "cold"],
                "weather",
                ["forecast", "report", "was"],
                ["rain", "sun", "cloud", "storm"],
            )
        } else {
            (["know", "wonder", "decide"], "whether", ["to", "she", "he"], ["ask", "doubt", "choose", "maybe"])
        };
        let mut s: Vec<String> = Vec::new();
        for _ in 0..r.random_range(2..=5) {
            s.push(pick(&mut r, &filler).to_string());
        }
        s.push(ctx[r.random_range(0..ctx.len())].to_string());
        for _ in 0..r.random_range(0..=3) {
            s.push(pick(&mut r, &filler).to_string());
        }
        s.push(pre[r.random_range(0..3)].to_string());
        s.push(target.to_string());
        s.push(post[r.random_range(0..3)].to_string());
        for _ in 0..r.random_range(1..=4) {
            s.push(pick(&mut r, &filler).to_string());
        }
        let first = s[0].clone();
        s[0] = first[..1].to_uppercase() + &first[1..];
        lines.push(s.join(" ") + " .");
    }
    lines.join("\n") + "\n"
}

pub fn shuffled<T, R: Rng>(mut v: Vec<T>, rng: &mut R) -> Vec<T> {
    v.shuffle(rng);
    v
}
