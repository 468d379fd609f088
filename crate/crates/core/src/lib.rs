//! Context-sensitive spelling correction.
//!
//! Two learners disambiguate members of a confusion set such as
//! `{weather, whether}` from the surrounding context: [`winnow::WinnowSModel`],
//! a cloud of Winnow2 nodes per member combined by weighted majority, and
//! [`bayes::BayesModel`], a Bayesian hybrid with interpolation smoothing.
//! [`harness`] runs the evaluation regimes (within- and across-corpus,
//! supervised plus unsupervised adaptation, incremental learning,
//! corruption sweeps) and renders their reports.

pub mod bayes;
pub mod cli;
pub mod corpus;
pub mod correct;
pub mod error;
pub mod features;
pub mod harness;
pub mod model;
pub mod winnow;

pub use error::{Error, Result};
