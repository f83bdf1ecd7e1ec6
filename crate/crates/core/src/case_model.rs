//! Weighted case models and the three validity notions for arguments.
//!
//! A case is a consistent set of literals; its weight is the number of data
//! points grouped into it and induces the preference (likelihood) ordering.
//! Equal weights are tied, so the ordering is a total preorder.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::literal::{Literal, LiteralSet, Value};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub literals: LiteralSet,
    pub weight: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Coherent,
    PresumptivelyValid,
    Conclusive,
}

/// How weight ties among the most preferred premise cases are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    /// Valid if the conclusion holds in at least one maximal case.
    #[default]
    Existential,
    /// Valid only if the conclusion holds in every maximal case.
    Universal,
}

/// A premise/conclusion pair, optionally annotated with its exceptions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Argument {
    pub premise: LiteralSet,
    pub conclusion: LiteralSet,
    pub status: Status,
    /// Weight of the most preferred case satisfying the premise.
    #[serde(default)]
    pub support: u64,
    #[serde(default)]
    pub exceptions: Vec<Argument>,
}

impl Argument {
    /// An unclassified argument, as used for validity queries.
    pub fn new(premise: LiteralSet, conclusion: LiteralSet) -> Self {
        Argument {
            premise,
            conclusion,
            status: Status::Coherent,
            support: 0,
            exceptions: Vec::new(),
        }
    }

    /// Checks the structural invariants: disjoint premise and conclusion, and
    /// exceptions that strictly extend the premise with a conflicting conclusion.
    pub fn validate(&self) -> Result<()> {
        if !self.premise.is_disjoint(&self.conclusion) {
            return Err(Error::invariant(format!(
                "premise and conclusion overlap in {self}"
            )));
        }
        for e in &self.exceptions {
            if !self.premise.is_proper_subset_of(&e.premise) {
                return Err(Error::invariant(format!(
                    "exception {e} does not extend the premise of {self}"
                )));
            }
            if !e.conclusion.conflicts_with(&self.conclusion) {
                return Err(Error::invariant(format!(
                    "exception {e} does not conflict with {self}"
                )));
            }
            e.validate()?;
        }
        Ok(())
    }

    /// Longest chain of nested exceptions below this argument.
    pub fn exception_depth(&self) -> usize {
        self.exceptions
            .iter()
            .map(|e| 1 + e.exception_depth())
            .max()
            .unwrap_or(0)
    }
}

impl std::fmt::Display for Argument {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let arrow = match self.status {
            Status::Conclusive => "→",
            Status::PresumptivelyValid => "⇝",
            Status::Coherent => "~",
        };
        if self.premise.is_empty() {
            write!(f, "{arrow} {}", self.conclusion)
        } else {
            write!(f, "{} {arrow} {}", self.premise, self.conclusion)
        }
    }
}

/// Distinct cases sorted by descending weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseModel {
    cases: Vec<Case>,
    #[serde(default)]
    attributes: BTreeMap<String, BTreeSet<Value>>,
}

impl CaseModel {
    /// Builds a model from explicit cases, e.g. a hand-written legal example.
    pub fn from_cases(cases: Vec<Case>) -> Result<Self> {
        if cases.is_empty() {
            return Err(Error::input("a case model needs at least one case"));
        }
        let mut seen = BTreeSet::new();
        for c in &cases {
            if c.weight == 0 {
                return Err(Error::input(format!("case {} has weight 0", c.literals)));
            }
            if !seen.insert(&c.literals) {
                return Err(Error::input(format!("duplicate case {}", c.literals)));
            }
        }
        let mut cases = cases;
        cases.sort_by(|a, b| {
            b.weight
                .cmp(&a.weight)
                .then_with(|| a.literals.cmp(&b.literals))
        });
        let mut attributes: BTreeMap<String, BTreeSet<Value>> = BTreeMap::new();
        for c in &cases {
            for (a, v) in c.literals.pairs() {
                attributes
                    .entry(a.to_string())
                    .or_default()
                    .insert(v.clone());
            }
        }
        Ok(CaseModel { cases, attributes })
    }

    /// Parses the JSON form `{cases: [{literals, weight}], attributes}`.
    pub fn from_json(json: &str) -> Result<Self> {
        let raw: CaseModel = serde_json::from_str(json)?;
        Self::from_cases(raw.cases)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn attributes(&self) -> &BTreeMap<String, BTreeSet<Value>> {
        &self.attributes
    }

    /// Every literal occurring in some case, in canonical order.
    pub fn literals(&self) -> Vec<Literal> {
        self.attributes
            .iter()
            .flat_map(|(a, vs)| vs.iter().map(move |v| Literal::new(a.clone(), v.clone())))
            .collect()
    }

    pub fn total_weight(&self) -> u64 {
        self.cases.iter().map(|c| c.weight).sum()
    }

    fn premise_cases<'a>(&'a self, premise: &'a LiteralSet) -> impl Iterator<Item = &'a Case> + 'a {
        self.cases
            .iter()
            .filter(move |c| premise.is_subset_of(&c.literals))
    }

    /// Weight of the most preferred case satisfying `premise` (0 if none).
    pub fn support(&self, premise: &LiteralSet) -> u64 {
        self.premise_cases(premise)
            .map(|c| c.weight)
            .max()
            .unwrap_or(0)
    }

    /// Some case makes both premise and conclusion true.
    pub fn is_coherent(&self, arg: &Argument) -> bool {
        self.premise_cases(&arg.premise)
            .any(|c| arg.conclusion.is_subset_of(&c.literals))
    }

    /// The conclusion holds in a most preferred case where the premise holds.
    pub fn is_presumptively_valid(&self, arg: &Argument) -> bool {
        self.is_presumptively_valid_with(arg, TieRule::Existential)
    }

    pub fn is_presumptively_valid_with(&self, arg: &Argument, ties: TieRule) -> bool {
        let top = self.support(&arg.premise);
        if top == 0 {
            return false;
        }
        let mut maximal = self.premise_cases(&arg.premise).filter(|c| c.weight == top);
        match ties {
            TieRule::Existential => maximal.any(|c| arg.conclusion.is_subset_of(&c.literals)),
            TieRule::Universal => maximal.all(|c| arg.conclusion.is_subset_of(&c.literals)),
        }
    }

    /// Coherent, and the conclusion holds in every case where the premise holds.
    pub fn is_conclusive(&self, arg: &Argument) -> bool {
        self.is_coherent(arg)
            && self
                .premise_cases(&arg.premise)
                .all(|c| arg.conclusion.is_subset_of(&c.literals))
    }

    /// Strongest status the argument has, or `None` if it is incoherent.
    pub fn classify(&self, arg: &Argument) -> Option<Status> {
        if self.is_conclusive(arg) {
            Some(Status::Conclusive)
        } else if self.is_presumptively_valid(arg) {
            Some(Status::PresumptivelyValid)
        } else if self.is_coherent(arg) {
            Some(Status::Coherent)
        } else {
            None
        }
    }
}

/// Groups identical rows into cases weighted by their multiplicity.
pub fn build_case_model(rows: &[LiteralSet]) -> Result<CaseModel> {
    if rows.is_empty() {
        return Err(Error::input("cannot build a case model from zero rows"));
    }
    let mut counts: BTreeMap<&LiteralSet, u64> = BTreeMap::new();
    for r in rows {
        *counts.entry(r).or_default() += 1;
    }
    CaseModel::from_cases(
        counts
            .into_iter()
            .map(|(literals, weight)| Case {
                literals: literals.clone(),
                weight,
            })
            .collect(),
    )
}

/// Like [`build_case_model`], for rows that already carry a multiplicity.
pub fn build_weighted_case_model(rows: &[(LiteralSet, u64)]) -> Result<CaseModel> {
    if rows.is_empty() {
        return Err(Error::input("cannot build a case model from zero rows"));
    }
    let mut counts: BTreeMap<&LiteralSet, u64> = BTreeMap::new();
    for (r, w) in rows {
        *counts.entry(r).or_default() += w;
    }
    CaseModel::from_cases(
        counts
            .into_iter()
            .filter(|(_, w)| *w > 0)
            .map(|(literals, weight)| Case {
                literals: literals.clone(),
                weight,
            })
            .collect(),
    )
}

/// The presumption-of-innocence model: {innocent, ¬guilty} (weight 2) is
/// preferred over {¬innocent, guilty, evidence} (weight 1).
pub fn presumption_of_innocence() -> CaseModel {
    CaseModel::from_cases(vec![
        Case {
            literals: crate::lits! { "innocent" => true, "guilty" => false },
            weight: 2,
        },
        Case {
            literals: crate::lits! { "innocent" => false, "guilty" => true, "evidence" => true },
            weight: 1,
        },
    ])
    .expect("fixture is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lits;

    fn arg(premise: LiteralSet, conclusion: LiteralSet) -> Argument {
        Argument::new(premise, conclusion)
    }

    #[test]
    fn duplicate_rows_are_counted() {
        let rows = vec![
            lits! { "a" => 1i64, "d" => 1i64 },
            lits! { "a" => 1i64, "d" => 1i64 },
            lits! { "a" => 0i64, "d" => 0i64 },
        ];
        let m = build_case_model(&rows).unwrap();
        assert_eq!(m.cases().len(), 2);
        assert_eq!(m.cases()[0].literals, lits! { "a" => 1i64, "d" => 1i64 });
        assert_eq!(m.cases()[0].weight, 2);
        assert_eq!(m.cases()[1].weight, 1);
        assert_eq!(m.total_weight(), 3);
    }

    #[test]
    fn single_row_and_empty_input() {
        let m = build_case_model(&[lits! { "a" => true }]).unwrap();
        assert_eq!(m.cases().len(), 1);
        assert_eq!(m.cases()[0].weight, 1);
        assert!(build_case_model(&[]).is_err());
    }

    #[test]
    fn presumption_model_shape() {
        let m = presumption_of_innocence();
        assert_eq!(m.cases().len(), 2);
        assert_eq!(
            m.cases()[0].literals,
            lits! { "innocent" => true, "guilty" => false }
        );
        assert!(m.cases()[0].weight > m.cases()[1].weight);
    }

    #[test]
    fn coherence_examples() {
        let m = presumption_of_innocence();
        assert!(m.is_coherent(&arg(lits! {}, lits! { "guilty" => true })));
        assert!(m.is_coherent(&arg(
            lits! { "evidence" => true },
            lits! { "innocent" => false }
        )));
        assert!(!m.is_coherent(&arg(
            lits! { "innocent" => true },
            lits! { "guilty" => true }
        )));
    }

    #[test]
    fn presumptive_validity_examples() {
        let m = presumption_of_innocence();
        assert!(m.is_presumptively_valid(&arg(lits! {}, lits! { "guilty" => false })));
        assert!(m.is_presumptively_valid(&arg(lits! {}, lits! { "innocent" => true })));
        assert!(m.is_presumptively_valid(&arg(
            lits! { "evidence" => true },
            lits! { "innocent" => false }
        )));
        assert!(m.is_presumptively_valid(&arg(
            lits! { "innocent" => true },
            lits! { "guilty" => false }
        )));
        assert!(!m.is_presumptively_valid(&arg(
            lits! { "evidence" => true },
            lits! { "innocent" => true }
        )));
    }

    #[test]
    fn conclusive_examples() {
        let m = presumption_of_innocence();
        assert!(m.is_conclusive(&arg(
            lits! { "innocent" => true },
            lits! { "guilty" => false }
        )));
        assert!(m.is_conclusive(&arg(
            lits! { "guilty" => true },
            lits! { "innocent" => false }
        )));
        assert!(!m.is_conclusive(&arg(lits! {}, lits! { "guilty" => false })));
    }

    #[test]
    fn tie_rule_matters_on_tied_cases() {
        let m = CaseModel::from_cases(vec![
            Case {
                literals: lits! { "a" => true, "d" => true },
                weight: 3,
            },
            Case {
                literals: lits! { "a" => true, "d" => false },
                weight: 3,
            },
        ])
        .unwrap();
        let a = arg(lits! { "a" => true }, lits! { "d" => true });
        assert!(m.is_presumptively_valid_with(&a, TieRule::Existential));
        assert!(!m.is_presumptively_valid_with(&a, TieRule::Universal));
    }

    #[test]
    fn from_cases_rejects_bad_input() {
        assert!(CaseModel::from_cases(vec![]).is_err());
        let c = Case {
            literals: lits! { "a" => true },
            weight: 1,
        };
        assert!(CaseModel::from_cases(vec![c.clone(), c.clone()]).is_err());
        assert!(CaseModel::from_cases(vec![Case { weight: 0, ..c }]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = presumption_of_innocence();
        let json = m.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["cases"][0]["literals"]["innocent"], true);
        assert_eq!(v["cases"][0]["weight"], 2);
        assert!(v["attributes"]["evidence"].is_array());
        assert_eq!(CaseModel::from_json(&json).unwrap(), m);
    }

    #[test]
    fn exception_invariants() {
        let parent = Argument {
            exceptions: vec![arg(
                lits! { "evidence" => true },
                lits! { "guilty" => true },
            )],
            ..arg(lits! {}, lits! { "guilty" => false })
        };
        assert!(parent.validate().is_ok());
        assert_eq!(parent.exception_depth(), 1);
        let bad = Argument {
            exceptions: vec![arg(
                lits! { "evidence" => true },
                lits! { "guilty" => false },
            )],
            ..arg(lits! {}, lits! { "guilty" => false })
        };
        assert!(bad.validate().is_err());
    }
}
