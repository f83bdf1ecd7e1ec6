//! Generators and naive reference implementations shared by the integration
//! tests. Everything here is written directly from the definitions and uses
//! none of the library's search or indexing code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use arglearn::{Case, CaseModel, Literal, LiteralSet, Status, TieRule, Value};
use proptest::prelude::*;

pub const ATTRS: [&str; 4] = ["a", "b", "c", "d"];

pub fn lits(pairs: &[(&str, i64)]) -> LiteralSet {
    LiteralSet::try_from_literals(pairs.iter().map(|&(a, v)| Literal::new(a, v))).unwrap()
}

/// Random case models: up to `max_attrs` attributes with up to `max_vals`
/// integer values each, up to `max_cases` distinct cases with weights 1..=4.
/// Cases may leave attributes unassigned.
pub fn arb_case_model(
    max_attrs: usize,
    max_vals: i64,
    max_cases: usize,
) -> impl Strategy<Value = CaseModel> {
    (1..=max_attrs, 1..=max_vals).prop_flat_map(move |(n_attrs, n_vals)| {
        let cell = prop_oneof![
            1 => Just(None),
            5 => (0..n_vals).prop_map(Some),
        ];
        let case = (prop::collection::vec(cell, n_attrs), 1u64..=4);
        prop::collection::vec(case, 1..=max_cases).prop_filter_map("all cases empty", |raw| {
            let mut merged: BTreeMap<LiteralSet, u64> = BTreeMap::new();
            for (cells, w) in raw {
                let set: LiteralSet = cells
                    .iter()
                    .enumerate()
                    .filter_map(|(i, v)| v.map(|v| (ATTRS[i].to_string(), Value::Int(v))))
                    .collect();
                if !set.is_empty() {
                    *merged.entry(set).or_default() += w;
                }
            }
            let cases: Vec<Case> = merged
                .into_iter()
                .map(|(literals, weight)| Case { literals, weight })
                .collect();
            CaseModel::from_cases(cases).ok()
        })
    })
}

fn contains(case: &Case, set: &LiteralSet) -> bool {
    set.pairs().all(|(a, v)| case.literals.get(a) == Some(v))
}

pub fn coherent(cases: &[Case], premise: &LiteralSet, conclusion: &LiteralSet) -> bool {
    cases
        .iter()
        .any(|c| contains(c, premise) && contains(c, conclusion))
}

pub fn presumptively_valid(
    cases: &[Case],
    premise: &LiteralSet,
    conclusion: &LiteralSet,
    ties: TieRule,
) -> bool {
    let matching: Vec<&Case> = cases.iter().filter(|c| contains(c, premise)).collect();
    let Some(top) = matching.iter().map(|c| c.weight).max() else {
        return false;
    };
    let mut best = matching.iter().filter(|c| c.weight == top);
    match ties {
        TieRule::Existential => best.any(|c| contains(c, conclusion)),
        TieRule::Universal => best.all(|c| contains(c, conclusion)),
    }
}

pub fn conclusive(cases: &[Case], premise: &LiteralSet, conclusion: &LiteralSet) -> bool {
    coherent(cases, premise, conclusion)
        && cases
            .iter()
            .filter(|c| contains(c, premise))
            .all(|c| contains(c, conclusion))
}

pub fn status(
    cases: &[Case],
    premise: &LiteralSet,
    conclusion: &LiteralSet,
    ties: TieRule,
) -> Option<Status> {
    if conclusive(cases, premise, conclusion) {
        Some(Status::Conclusive)
    } else if presumptively_valid(cases, premise, conclusion, ties) {
        Some(Status::PresumptivelyValid)
    } else if coherent(cases, premise, conclusion) {
        Some(Status::Coherent)
    } else {
        None
    }
}

/// Every consistent premise over the model's attribute domains, skipping
/// `exclude`, with at most `max_size` literals.
pub fn premises(model: &CaseModel, exclude: &str, max_size: usize) -> Vec<LiteralSet> {
    let mut out = vec![LiteralSet::new()];
    for (attr, values) in model.attributes() {
        if attr == exclude {
            continue;
        }
        let mut next = out.clone();
        for p in &out {
            if p.len() >= max_size {
                continue;
            }
            for v in values {
                let mut q = p.clone();
                q.insert(Literal::new(attr.clone(), v.clone())).unwrap();
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// (premise, conclusion literal) pairs with their strongest status, for every
/// coherent single-conclusion argument.
pub fn brute_force(
    model: &CaseModel,
    max_size: usize,
    ties: TieRule,
) -> BTreeSet<(LiteralSet, LiteralSet, Status)> {
    let mut out = BTreeSet::new();
    for (attr, values) in model.attributes() {
        for p in premises(model, attr, max_size) {
            for v in values {
                let c = lits_of(attr, v);
                if let Some(s) = status(model.cases(), &p, &c, ties) {
                    out.insert((p.clone(), c, s));
                }
            }
        }
    }
    out
}

pub fn lits_of(attr: &str, v: &Value) -> LiteralSet {
    LiteralSet::try_from_literals([Literal::new(attr, v.clone())]).unwrap()
}

/// Weighted first-applicable-rule accuracy of `(premise, value)` rules.
pub fn list_accuracy(rules: &[(LiteralSet, Value)], rows: &[Case], target: &str) -> f64 {
    let (mut total, mut correct) = (0u64, 0u64);
    for row in rows {
        let Some(actual) = row.literals.get(target) else {
            continue;
        };
        total += row.weight;
        let predicted = rules.iter().find(|(p, _)| contains(row, p)).map(|(_, v)| v);
        if predicted == Some(actual) {
            correct += row.weight;
        }
    }
    if total == 0 {
        0.0
    } else {
        correct as f64 / total as f64
    }
}
