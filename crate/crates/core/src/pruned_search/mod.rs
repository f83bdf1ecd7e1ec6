//! Pruned Search: systematic learning of presumptively valid and conclusive
//! arguments from a case model.
//!
//! For every conclusion literal the search walks premises level by level,
//! discarding any premise that is incoherent with the conclusion (all of its
//! supersets are incoherent too). Surviving pairs are classified, filtered
//! for relevance, merged per premise and annotated with their exceptions.

mod join;
mod relevance;
mod search;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::case_model::{Argument, CaseModel, Status, TieRule};
use crate::error::{Error, Result};
use crate::index::{IndexedModel, LitId};
use crate::literal::{LiteralSet, Value};

pub use join::join_premises;
pub use relevance::{filter_relevant, merge_same_premise};

use relevance::Draft;
use search::Found;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_premise_size: usize,
    pub exception_depth: usize,
    /// Attributes whose literals are used as conclusions; all when `None`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_attributes: Option<Vec<String>>,
    #[serde(default)]
    pub tie_rule: TieRule,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_premise_size: 2,
            exception_depth: 1,
            target_attributes: None,
            tie_rule: TieRule::Existential,
        }
    }
}

impl SearchConfig {
    pub fn new(max_premise_size: usize, exception_depth: usize) -> Self {
        SearchConfig {
            max_premise_size,
            exception_depth,
            ..Default::default()
        }
    }

    pub fn with_targets<S: Into<String>>(mut self, targets: impl IntoIterator<Item = S>) -> Self {
        self.target_attributes = Some(targets.into_iter().map(Into::into).collect());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_premise_size == 0 {
            return Err(Error::input("max_premise_size must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub attributes: BTreeMap<String, BTreeSet<Value>>,
    pub case_count: usize,
    pub total_weight: u64,
}

impl ModelSummary {
    pub fn of(model: &CaseModel) -> Self {
        ModelSummary {
            attributes: model.attributes().clone(),
            case_count: model.cases().len(),
            total_weight: model.total_weight(),
        }
    }
}

/// The learned argument set: relevant, merged per premise and ordered by
/// (premise size, premise, conclusion).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theory {
    pub arguments: Vec<Argument>,
    pub config: SearchConfig,
    pub model_summary: ModelSummary,
}

impl Theory {
    /// Top-level arguments concluding something about `attribute`.
    pub fn arguments_for<'a>(
        &'a self,
        attribute: &'a str,
    ) -> impl Iterator<Item = &'a Argument> + 'a {
        self.arguments
            .iter()
            .filter(move |a| a.conclusion.has_attribute(attribute))
    }
}

fn conclusion_literals(ix: &IndexedModel, config: &SearchConfig) -> Result<Vec<LitId>> {
    let allowed: Option<BTreeSet<usize>> = match &config.target_attributes {
        None => None,
        Some(targets) => Some(
            targets
                .iter()
                .map(|t| {
                    ix.attr_index(t)
                        .ok_or_else(|| Error::input(format!("unknown target attribute {t}")))
                })
                .collect::<Result<_>>()?,
        ),
    };
    Ok((0..ix.literals.len() as LitId)
        .filter(|&l| {
            allowed
                .as_ref()
                .is_none_or(|a| a.contains(&ix.lit_attr[l as usize]))
        })
        .collect())
}

fn run_search(ix: &IndexedModel, config: &SearchConfig) -> Result<Vec<Found>> {
    config.validate()?;
    let conclusions = conclusion_literals(ix, config)?;
    let mut found: Vec<Found> = conclusions
        .par_iter()
        .flat_map_iter(|&c| {
            search::search_conclusion(ix, c, config.max_premise_size, config.tie_rule)
        })
        .collect();
    found.sort_by(|a, b| {
        (a.premise.len(), &a.premise, a.conclusion).cmp(&(
            b.premise.len(),
            &b.premise,
            b.conclusion,
        ))
    });
    Ok(found)
}

/// Every coherent argument with a single-literal conclusion and a premise of
/// at most `max_premise_size` literals, labelled with its strongest status.
/// This is the raw search output before filtering and merging.
pub fn search_arguments(model: &CaseModel, config: &SearchConfig) -> Result<Vec<Argument>> {
    let ix = IndexedModel::new(model);
    let found = run_search(&ix, config)?;
    Ok(found
        .into_iter()
        .map(|f| Argument {
            premise: ix.to_set(&f.premise),
            conclusion: ix.to_set(&[f.conclusion]),
            status: f.status,
            support: f.support,
            exceptions: Vec::new(),
        })
        .collect())
}

/// Learns a theory from `model`.
///
/// Only conclusions that hold in every most preferred premise case enter the
/// theory. With weight ties the existential reading can make both `d` and
/// `¬d` presumptively valid for the same premise; those tie-dependent
/// conclusions stay in the raw search output but cannot be merged into one
/// consistent argument, so they are left out here.
pub fn learn_pruned(model: &CaseModel, config: &SearchConfig) -> Result<Theory> {
    let ix = IndexedModel::new(model);
    let found = run_search(&ix, config)?;
    let drafts: Vec<Draft> = found
        .into_iter()
        .filter(|f| f.status >= Status::PresumptivelyValid && f.decisive)
        .map(|f| Draft {
            premise: f.premise,
            conclusion: vec![f.conclusion],
            status: f.status,
            support: f.support,
        })
        .collect();

    let mask = relevance::relevant_mask(&drafts, &ix.lit_attr);
    let relevant: Vec<Draft> = drafts
        .into_iter()
        .zip(mask)
        .filter_map(|(d, keep)| keep.then_some(d))
        .collect();
    let mut merged = relevance::merge_drafts(relevant, &ix.lit_attr)?;
    merged.sort_by(|a, b| {
        (a.premise.len(), &a.premise, &a.conclusion).cmp(&(
            b.premise.len(),
            &b.premise,
            &b.conclusion,
        ))
    });
    let children = relevance::exception_index(&merged, &ix.lit_attr);
    let to_set = |ids: &[u32]| ix.to_set(ids);
    let arguments = relevance::materialize(&merged, &children, config.exception_depth, &to_set);

    Ok(Theory {
        arguments,
        config: config.clone(),
        model_summary: ModelSummary::of(model),
    })
}

/// Presumptively valid arguments that strictly extend `arg`'s premise and
/// conclude something conflicting with it, each carrying its own exceptions
/// down to `remaining_depth` levels in total.
///
/// Exceptions are taken from the theory learned on `model` with unrestricted
/// premise size. `arg` must be presumptively valid but not conclusive.
pub fn find_exceptions(
    model: &CaseModel,
    arg: &Argument,
    remaining_depth: usize,
) -> Result<Vec<Argument>> {
    match model.classify(arg) {
        Some(Status::PresumptivelyValid) => {}
        Some(Status::Conclusive) => {
            return Err(Error::input(format!(
                "conclusive argument {} has no exceptions",
                Argument::new(arg.premise.clone(), arg.conclusion.clone())
            )))
        }
        _ => {
            return Err(Error::input(format!(
                "argument {} is not presumptively valid",
                Argument::new(arg.premise.clone(), arg.conclusion.clone())
            )))
        }
    }
    if remaining_depth == 0 {
        return Ok(Vec::new());
    }
    let config = SearchConfig {
        max_premise_size: model.attributes().len().max(1),
        exception_depth: remaining_depth - 1,
        target_attributes: None,
        tie_rule: TieRule::Existential,
    };
    let theory = learn_pruned(model, &config)?;
    Ok(theory
        .arguments
        .into_iter()
        .filter(|e| {
            arg.premise.is_proper_subset_of(&e.premise)
                && e.conclusion.conflicts_with(&arg.conclusion)
        })
        .collect())
}

/// Exhaustive enumeration of every (premise, single literal) pair over the
/// model's literals, classified with the case-model predicates. Exponential;
/// meant as a reference on small models.
pub fn enumerate_arguments(
    model: &CaseModel,
    max_premise_size: usize,
    ties: TieRule,
) -> Vec<Argument> {
    let attrs: Vec<(&String, Vec<&Value>)> = model
        .attributes()
        .iter()
        .map(|(a, vs)| (a, vs.iter().collect()))
        .collect();
    let mut out = Vec::new();
    for (ci, (cattr, cvals)) in attrs.iter().enumerate() {
        let others: Vec<&(&String, Vec<&Value>)> = attrs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != ci)
            .map(|(_, a)| a)
            .collect();
        let mut premises = vec![LiteralSet::new()];
        // Each attribute is absent or takes one of its values.
        for (attr, vals) in &others {
            let mut next = Vec::new();
            for p in &premises {
                next.push(p.clone());
                if p.len() < max_premise_size {
                    for v in vals {
                        let mut q = p.clone();
                        q.insert(crate::Literal::new((*attr).clone(), (*v).clone()))
                            .expect("fresh attribute");
                        next.push(q);
                    }
                }
            }
            premises = next;
        }
        for v in cvals {
            let conclusion: LiteralSet = [((*cattr).clone(), (*v).clone())].into_iter().collect();
            for p in &premises {
                let candidate = Argument::new(p.clone(), conclusion.clone());
                let status = if model.is_conclusive(&candidate) {
                    Some(Status::Conclusive)
                } else if model.is_presumptively_valid_with(&candidate, ties) {
                    Some(Status::PresumptivelyValid)
                } else if model.is_coherent(&candidate) {
                    Some(Status::Coherent)
                } else {
                    None
                };
                if let Some(status) = status {
                    out.push(Argument {
                        status,
                        support: model.support(p),
                        ..candidate
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.premise.len(), &a.premise, &a.conclusion).cmp(&(
            b.premise.len(),
            &b.premise,
            &b.conclusion,
        ))
    });
    out
}
