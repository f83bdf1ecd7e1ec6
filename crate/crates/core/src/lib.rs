//! Learning defeasible arguments from tabular data.

pub mod case_model;
pub mod data;
pub mod dectree;
pub mod discretize;
pub mod error;
pub mod experiment;
pub mod hero;
mod index;
pub mod inference;
pub mod literal;
pub mod pruned_search;

pub use case_model::{
    build_case_model, build_weighted_case_model, presumption_of_innocence, Argument, Case,
    CaseModel, Status, TieRule,
};
pub use data::{load_csv, split, Column, Table};
pub use dectree::{Tree, TreeNode, TreeParams};
pub use discretize::{apply_scheme, BinningScheme, DiscretizationParams, Method};
pub use error::{Error, Result};
pub use experiment::{run_experiment, Binning, Bins, ExperimentConfig, ExperimentOutcome, Learner};
pub use hero::{Rule, RuleList};
pub use inference::{AttackGraph, EvalReport};
pub use literal::{Literal, LiteralSet, Value};
pub use pruned_search::{learn_pruned, SearchConfig, Theory};
