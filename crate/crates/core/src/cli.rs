//! Command-line front end.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bayes::BayesConfig;
use crate::correct::{apply_corrections, find_corrections};
use crate::corpus::{ConfusionSet, Corpus, SentenceMode, TagDictionary};
use crate::error::{Error, Result};
use crate::features::{ExtractionConfig, LabelSource, Pruning};
use crate::harness::{self, ExperimentConfig, TrainingPart};
use crate::model::{Algorithm, ModelFile};
use crate::winnow::{GammaSchedule, WinnowConfig};

const EXIT_CODES: &str = "Exit codes:\n  0  success\n  1  invalid arguments\n  2  unreadable or malformed input, or unwritable output\n  3  no training occurrences for any confusion set";

#[derive(Debug, Parser)]
#[command(name = "ctxspell", version, about = "Context-sensitive spelling correction", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one model section per confusion set and write the model file.
    Train(TrainArgs),
    /// Run an evaluation regime and print its report.
    Eval(EvalArgs),
    /// Flag (and optionally fix) confusion-set words in a text.
    Correct(CorrectArgs),
    /// Accuracy against corruption percentage; same as `eval --regime sweep`.
    Sweep(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Bayes,
    Winnows,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Bayes => Algorithm::Bayes,
            AlgorithmArg::Winnows => Algorithm::WinnowS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PruningArg {
    Pruned,
    Unpruned,
}

impl From<PruningArg> for Pruning {
    fn from(p: PruningArg) -> Self {
        match p {
            PruningArg::Pruned => Pruning::Pruned,
            PruningArg::Unpruned => Pruning::Unpruned,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Regime {
    Within,
    Across,
    Supunsup,
    Incremental,
    Sweep,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Training corpus: a text file or a directory of text files.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Tag dictionary, one `word<TAB>TAG TAG ...` entry per line.
    #[arg(long)]
    pub dict: Option<PathBuf>,
    /// Confusion sets, one per line, members separated by `|`.
    #[arg(long)]
    pub confusions: PathBuf,
    /// Treat every line of the corpus as one sentence.
    #[arg(long)]
    pub sentences_per_line: bool,
}

#[derive(Debug, Clone, Args)]
pub struct LearnerArgs {
    /// Context-word window half-width.
    #[arg(long = "k", default_value_t = 10)]
    pub k: usize,
    /// Longest collocation.
    #[arg(long = "l", default_value_t = 2)]
    pub l: usize,
    /// Bayes smoothing strength.
    #[arg(long, default_value_t = 10.0)]
    pub kappa: f64,
    /// Floor of the expert-weight demotion factor.
    #[arg(long, default_value_t = 0.5)]
    pub gamma_min: f64,
    /// Examples over which the demotion factor decays to its floor.
    #[arg(long = "gamma-T", default_value_t = 1000.0)]
    pub gamma_t: f64,
    /// Relative weight below which attributes are dropped.
    #[arg(long, default_value_t = 2f64.powi(-20))]
    pub epsilon: f64,
}

impl LearnerArgs {
    fn extraction(&self) -> Result<ExtractionConfig> {
        ExtractionConfig::new(self.k, self.l)
    }

    fn bayes(&self) -> BayesConfig {
        BayesConfig {
            kappa: self.kappa,
            ..BayesConfig::default()
        }
    }

    fn winnow(&self) -> WinnowConfig {
        let mut config = WinnowConfig::default();
        config.params.epsilon = self.epsilon;
        config.gamma = GammaSchedule {
            min: self.gamma_min,
            horizon: self.gamma_t,
        };
        config
    }
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub learner: LearnerArgs,
    #[arg(long, value_enum, default_value = "winnows")]
    pub algorithm: AlgorithmArg,
    #[arg(long, value_enum, default_value = "unpruned")]
    pub pruning: PruningArg,
    /// Model file to write.
    #[arg(long)]
    pub model: PathBuf,
    /// Where to write the per-set training summary (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub learner: LearnerArgs,
    /// Second corpus, for the across, supunsup, incremental and sweep regimes.
    #[arg(long)]
    pub corpus_b: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "within")]
    pub regime: Regime,
    /// Only this learner (default: both).
    #[arg(long, value_enum)]
    pub algorithm: Option<AlgorithmArg>,
    /// Only this pruning regime (default: both for within, unpruned otherwise).
    #[arg(long, value_enum)]
    pub pruning: Option<PruningArg>,
    /// Fraction of corpus sentences used for training.
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    /// Fraction of the second corpus held out for testing.
    #[arg(long, default_value_t = 0.4)]
    pub test_fraction: f64,
    /// Corruption of the unsupervised part, in percent.
    #[arg(long, default_value_t = 5.0)]
    pub percent: f64,
    /// Corruption percentages for the sweep.
    #[arg(long, value_delimiter = ',', default_value = "0,5,10,15,20")]
    pub percents: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Report file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit a LaTeX tabular instead of TSV.
    #[arg(long)]
    pub latex: bool,
    /// Print every effective setting and exit.
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CorrectArgs {
    /// Model file written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Tag dictionary; use the one the model was trained with.
    #[arg(long)]
    pub dict: Option<PathBuf>,
    #[arg(long)]
    pub sentences_per_line: bool,
    /// Write the corrected text, sending correction records to stderr.
    #[arg(long)]
    pub apply: bool,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Input text (default: stdin).
    pub input: Option<PathBuf>,
}

/// Process exit status for an error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::InvalidArgument(_) => 1,
        Error::Io { .. } | Error::Parse { .. } => 2,
        Error::Empty(_) => 3,
    }
}

fn mode(per_line: bool) -> SentenceMode {
    if per_line {
        SentenceMode::PerLine
    } else {
        SentenceMode::Heuristic
    }
}

fn load_dict(path: Option<&Path>) -> Result<TagDictionary> {
    path.map_or_else(|| Ok(TagDictionary::new()), TagDictionary::from_path)
}

fn load_sets(path: &Path) -> Result<Vec<ConfusionSet>> {
    let mut sets = ConfusionSet::from_path(path)?;
    sets.sort_by(|a, b| a.id.cmp(&b.id));
    sets.dedup_by(|a, b| a.id == b.id);
    Ok(sets)
}

struct Inputs {
    dict: TagDictionary,
    corpus: Corpus,
    sets: Vec<ConfusionSet>,
}

fn load_inputs(input: &InputArgs) -> Result<Inputs> {
    let dict = load_dict(input.dict.as_deref())?;
    let corpus = Corpus::from_path(&input.corpus, &dict, mode(input.sentences_per_line))?;
    let sets = load_sets(&input.confusions)?;
    Ok(Inputs { dict, corpus, sets })
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::io(Path::new("<stdout>"), e)),
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Train(args) => cmd_train(&args, stdout, stderr),
        Command::Eval(args) => cmd_eval(&args, stdout),
        Command::Sweep(mut args) => {
            args.regime = Regime::Sweep;
            cmd_eval(&args, stdout)
        }
        Command::Correct(args) => cmd_correct(&args, stdout, stderr),
    }
}

pub fn cmd_train(args: &TrainArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let Inputs { corpus, sets, .. } = load_inputs(&args.input)?;
    let config = ExperimentConfig {
        extraction: args.learner.extraction()?,
        bayes: args.learner.bayes(),
        winnow: args.learner.winnow(),
        ..ExperimentConfig::default()
    };
    let algorithm = Algorithm::from(args.algorithm);
    let pruning = Pruning::from(args.pruning);
    let trained: Vec<Option<(usize, crate::model::SetModel, usize)>> = sets
        .par_iter()
        .map(|set| {
            let occs = set.occurrences(&corpus);
            if occs.is_empty() {
                return Ok(None);
            }
            let parts = [TrainingPart::new(&corpus.documents, &occs, LabelSource::Gold)];
            let (model, features) = harness::train_model(algorithm, set, &parts, pruning, &config)?;
            Ok(Some((occs.len(), model, features)))
        })
        .collect::<Result<_>>()?;
    let mut summary = String::from("Confusion set\tTraining cases\tFeatures\n");
    let mut file = ModelFile::default();
    for (set, entry) in sets.iter().zip(trained) {
        match entry {
            Some((cases, model, features)) => {
                let _ = writeln!(summary, "{}\t{cases}\t{features}", set.id);
                file.sections.push(model);
            }
            None => {
                let _ = writeln!(stderr, "skipping {}: no occurrences in the corpus", set.id);
            }
        }
    }
    if file.sections.is_empty() {
        return Err(Error::Empty("no training occurrences for any confusion set"));
    }
    file.save(&args.model)?;
    emit(args.out.as_deref(), &summary, stdout)
}

fn experiment_config(args: &EvalArgs) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig {
        train_fraction: args.train_fraction,
        test_fraction: args.test_fraction,
        percent: args.percent,
        seed: args.seed,
        extraction: args.learner.extraction()?,
        bayes: args.learner.bayes(),
        winnow: args.learner.winnow(),
        ..ExperimentConfig::default()
    };
    if let Some(a) = args.algorithm {
        config.algorithms = vec![a.into()];
    }
    if let Some(p) = args.pruning {
        config.prunings = vec![p.into()];
        config.pruning = p.into();
    }
    config.validate()?;
    Ok(config)
}

fn describe_config(args: &EvalArgs, config: &ExperimentConfig) -> String {
    let regime = args.regime.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let list = |v: Vec<String>| v.join(",");
    let w = &config.winnow;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k}={v}");
    };
    kv("regime", regime);
    kv("corpus", args.input.corpus.display().to_string());
    kv("corpus_b", args.corpus_b.as_ref().map_or("-".into(), |p| p.display().to_string()));
    kv("dict", args.input.dict.as_ref().map_or("-".into(), |p| p.display().to_string()));
    kv("confusions", args.input.confusions.display().to_string());
    kv("sentences_per_line", args.input.sentences_per_line.to_string());
    kv("algorithms", list(config.algorithms.iter().map(|a| a.key().to_string()).collect()));
    kv("within_prunings", list(config.prunings.iter().map(|p| p.name().to_string()).collect()));
    kv("pruning", config.pruning.name().to_string());
    kv("train_fraction", config.train_fraction.to_string());
    kv("test_fraction", config.test_fraction.to_string());
    kv("percent", config.percent.to_string());
    kv("percents", list(args.percents.iter().map(f64::to_string).collect()));
    kv("seed", config.seed.to_string());
    kv("k", config.extraction.window.to_string());
    kv("l", config.extraction.max_collocation.to_string());
    kv("kappa", config.bayes.kappa.to_string());
    kv("resolve_dependencies", config.bayes.resolve_dependencies.to_string());
    kv("theta", w.params.theta.to_string());
    kv("alpha", w.params.alpha.to_string());
    kv("betas", list(w.betas.iter().map(f64::to_string).collect()));
    kv("epsilon", format!("{:e}", w.params.epsilon));
    kv("sweep_interval", w.params.sweep_interval.to_string());
    kv("gamma_min", w.gamma.min.to_string());
    kv("gamma_T", w.gamma.horizon.to_string());
    kv("format", if args.latex { "latex" } else { "tsv" }.to_string());
    kv("out", args.out.as_ref().map_or("-".into(), |p| p.display().to_string()));
    out
}

pub fn cmd_eval(args: &EvalArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = experiment_config(args)?;
    if args.print_config {
        return emit(None, &describe_config(args, &config), stdout);
    }
    let Inputs { dict, corpus, sets } = load_inputs(&args.input)?;
    let corpus_b = || -> Result<Corpus> {
        let path = args
            .corpus_b
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("this regime needs --corpus-b".into()))?;
        Corpus::from_path(path, &dict, mode(args.input.sentences_per_line))
    };
    let text = match args.regime {
        Regime::Sweep => {
            let report = harness::corruption_sweep(&corpus, &corpus_b()?, &sets, &config, &args.percents)?;
            if args.latex {
                report.to_latex()
            } else {
                report.to_tsv()
            }
        }
        regime => {
            let report = match regime {
                Regime::Within => harness::run_within(&corpus, &sets, &config)?,
                Regime::Across => harness::run_across(&corpus, &corpus_b()?, &sets, &config)?,
                Regime::Supunsup => harness::run_supunsup(&corpus, &corpus_b()?, &sets, &config)?,
                _ => harness::run_incremental(&corpus, &corpus_b()?, &sets, &config)?,
            };
            if args.latex {
                report.to_latex()
            } else {
                report.to_tsv()
            }
        }
    };
    emit(args.out.as_deref(), &text, stdout)
}

pub fn cmd_correct(args: &CorrectArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let models = ModelFile::load(&args.model)?;
    let dict = load_dict(args.dict.as_deref())?;
    let text = match &args.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::io(Path::new("<stdin>"), e))?;
            buf
        }
    };
    let corrections = find_corrections(&text, &dict, mode(args.sentences_per_line), &models);
    let records: String = corrections.iter().map(|c| c.record() + "\n").collect();
    if args.apply {
        stderr
            .write_all(records.as_bytes())
            .map_err(|e| Error::io(Path::new("<stderr>"), e))?;
        emit(args.out.as_deref(), &apply_corrections(&text, &corrections), stdout)
    } else {
        emit(args.out.as_deref(), &records, stdout)
    }
}
