//! Python bindings: tokenizer, chi-square, a single Winnow node, a
//! trainable corrector and the within-corpus evaluation.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use ctxspell::corpus::{ConfusionSet, Corpus, SentenceMode, TagDictionary};
use ctxspell::correct::{apply_corrections, find_corrections};
use ctxspell::features::{LabelSource, Pruning};
use ctxspell::harness::{self, ExperimentConfig, TrainingPart};
use ctxspell::model::{Algorithm, ModelFile};
use ctxspell::winnow::{WinnowNode as Node, WinnowParams};
use ctxspell::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn dictionary(text: Option<&str>) -> PyResult<TagDictionary> {
    text.map_or_else(|| Ok(TagDictionary::new()), TagDictionary::parse)
        .map_err(py_err)
}

fn mode(per_line: bool) -> SentenceMode {
    if per_line {
        SentenceMode::PerLine
    } else {
        SentenceMode::Heuristic
    }
}

fn algorithm(name: &str) -> PyResult<Algorithm> {
    match name.to_ascii_lowercase().as_str() {
        "bayes" => Ok(Algorithm::Bayes),
        "winnows" => Ok(Algorithm::WinnowS),
        _ => Err(PyValueError::new_err(format!("unknown algorithm {name:?}"))),
    }
}

fn pruning(name: &str) -> PyResult<Pruning> {
    match name.to_ascii_lowercase().as_str() {
        "pruned" => Ok(Pruning::Pruned),
        "unpruned" => Ok(Pruning::Unpruned),
        _ => Err(PyValueError::new_err(format!("unknown pruning {name:?}"))),
    }
}

/// Tokens of `text` as `(surface, start, end)` byte offsets.
#[pyfunction]
#[pyo3(signature = (text, dict_text=None))]
fn tokenize(text: &str, dict_text: Option<&str>) -> PyResult<Vec<(String, usize, usize)>> {
    let doc = ctxspell::corpus::tokenize(text, &dictionary(dict_text)?);
    Ok(doc
        .tokens()
        .iter()
        .map(|t| (t.surface.clone(), t.start, t.end))
        .collect())
}

/// Pearson chi-square of a members x [present, absent] table.
#[pyfunction]
fn chi_square(table: Vec<[u64; 2]>) -> PyResult<f64> {
    ctxspell::features::chi_square(&table).map_err(py_err)
}

/// One Winnow2 learner over integer attribute ids.
#[pyclass]
struct WinnowNode {
    inner: Node,
}

#[pymethods]
impl WinnowNode {
    #[new]
    #[pyo3(signature = (beta=0.5, epsilon=None))]
    fn new(beta: f64, epsilon: Option<f64>) -> PyResult<Self> {
        let mut params = WinnowParams::default();
        if let Some(e) = epsilon {
            params.epsilon = e;
        }
        Ok(Self {
            inner: Node::new(beta, params).map_err(py_err)?,
        })
    }

    fn activation(&self, active: Vec<u32>) -> f64 {
        self.inner.activation(&active)
    }

    fn predict(&self, active: Vec<u32>) -> bool {
        self.inner.predict(&active)
    }

    /// Returns True when the example changed the weights.
    fn update(&mut self, active: Vec<u32>, label: bool) -> bool {
        self.inner.update(&active, label)
    }

    fn weights(&self) -> BTreeMap<u32, f64> {
        self.inner.weights().collect()
    }

    #[getter]
    fn seen(&self) -> u64 {
        self.inner.seen()
    }
}

/// Trained models for a list of confusion sets.
#[pyclass]
struct Corrector {
    models: ModelFile,
    dict: TagDictionary,
    sentences_per_line: bool,
}

#[pymethods]
impl Corrector {
    /// Trains one section per confusion set that occurs in `corpus`.
    /// `confusions` holds one `a|b|c` set per line.
    #[staticmethod]
    #[pyo3(signature = (corpus, confusions, algorithm="winnows", pruning="unpruned", dict_text=None, sentences_per_line=false))]
    fn train(
        corpus: &str,
        confusions: &str,
        algorithm: &str,
        pruning: &str,
        dict_text: Option<&str>,
        sentences_per_line: bool,
    ) -> PyResult<Self> {
        let alg = self::algorithm(algorithm)?;
        let pruning = self::pruning(pruning)?;
        let dict = dictionary(dict_text)?;
        let corpus = Corpus::from_text("corpus", corpus, &dict, mode(sentences_per_line));
        let sets = ConfusionSet::parse_list(confusions).map_err(py_err)?;
        let config = ExperimentConfig::default();
        let mut models = ModelFile::default();
        for set in &sets {
            let occs = set.occurrences(&corpus);
            if occs.is_empty() {
                continue;
            }
            let parts = [TrainingPart::new(&corpus.documents, &occs, LabelSource::Gold)];
            let (model, _) = harness::train_model(alg, set, &parts, pruning, &config).map_err(py_err)?;
            models.sections.push(model);
        }
        if models.sections.is_empty() {
            return Err(PyValueError::new_err("no training occurrences for any confusion set"));
        }
        Ok(Self {
            models,
            dict,
            sentences_per_line,
        })
    }

    /// Loads a model file; pass the dictionary used for training.
    #[staticmethod]
    #[pyo3(signature = (path, dict_text=None, sentences_per_line=false))]
    fn load(path: &str, dict_text: Option<&str>, sentences_per_line: bool) -> PyResult<Self> {
        Ok(Self {
            models: ModelFile::load(path).map_err(py_err)?,
            dict: dictionary(dict_text)?,
            sentences_per_line,
        })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.models.save(path).map_err(py_err)
    }

    /// Confusion sets with a trained section.
    fn sets(&self) -> Vec<Vec<String>> {
        self.models
            .sections
            .iter()
            .map(|s| s.members().to_vec())
            .collect()
    }

    /// `(line, column, written, suggested)` for each flagged word.
    fn corrections(&self, text: &str) -> Vec<(usize, usize, String, String)> {
        find_corrections(text, &self.dict, mode(self.sentences_per_line), &self.models)
            .into_iter()
            .map(|c| (c.line, c.column, c.written, c.suggested))
            .collect()
    }

    /// `text` with every flagged word replaced.
    fn apply(&self, text: &str) -> String {
        let found = find_corrections(text, &self.dict, mode(self.sentences_per_line), &self.models);
        apply_corrections(text, &found)
    }

    fn to_text(&self) -> String {
        self.models.to_text()
    }
}

/// Within-corpus evaluation as a TSV report.
#[pyfunction]
#[pyo3(signature = (corpus, confusions, dict_text=None, sentences_per_line=false, train_fraction=0.8, seed=1))]
fn run_within(
    corpus: &str,
    confusions: &str,
    dict_text: Option<&str>,
    sentences_per_line: bool,
    train_fraction: f64,
    seed: u64,
) -> PyResult<String> {
    let dict = dictionary(dict_text)?;
    let corpus = Corpus::from_text("corpus", corpus, &dict, mode(sentences_per_line));
    let sets = ConfusionSet::parse_list(confusions).map_err(py_err)?;
    let config = ExperimentConfig {
        train_fraction,
        seed,
        ..ExperimentConfig::default()
    };
    harness::run_within(&corpus, &sets, &config)
        .map(|r| r.to_tsv())
        .map_err(py_err)
}

#[pymodule]
fn pyctxspell(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(chi_square, m)?)?;
    m.add_function(wrap_pyfunction!(run_within, m)?)?;
    m.add_class::<WinnowNode>()?;
    m.add_class::<Corrector>()?;
    Ok(())
}
