//! HeRO: a totally ordered defeasible rule list grown greedily by training
//! accuracy.
//!
//! Each step inserts the (rule, position) pair with the largest increase in
//! weighted training accuracy. Premises are explored level by level and a
//! premise is only specialized while its maximum information gain (the gain
//! of a perfect rule on its matching rows) beats the best gain already found.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::case_model::{Case, CaseModel};
use crate::error::{Error, Result};
use crate::literal::{Literal, LiteralSet, Value};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub premise: LiteralSet,
    pub conclusion: LiteralSet,
}

impl Rule {
    pub fn new(premise: LiteralSet, conclusion: LiteralSet) -> Self {
        Rule {
            premise,
            conclusion,
        }
    }

    pub fn applies_to(&self, instance: &LiteralSet) -> bool {
        self.premise.is_subset_of(instance)
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.premise.is_empty() {
            write!(f, "⇝ {}", self.conclusion)
        } else {
            write!(f, "{} ⇝ {}", self.premise, self.conclusion)
        }
    }
}

/// Rules in priority order; position 0 is consulted first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RuleList {
    /// The predicted attribute, or `None` for a list merged over several targets.
    pub target: Option<String>,
    pub rules: Vec<Rule>,
}

impl RuleList {
    pub fn new(target: impl Into<String>) -> Self {
        RuleList {
            target: Some(target.into()),
            rules: Vec::new(),
        }
    }

    /// The first applicable rule concluding about `target` decides.
    pub fn predict(&self, instance: &LiteralSet, target: &str) -> Option<Value> {
        self.rules
            .iter()
            .filter(|r| r.applies_to(instance))
            .find_map(|r| r.conclusion.get(target).cloned())
    }

    pub fn validate(&self) -> Result<()> {
        for (i, r) in self.rules.iter().enumerate() {
            if r.conclusion.is_empty() {
                return Err(Error::invariant(format!(
                    "rule {i} has an empty conclusion"
                )));
            }
            if r.premise.is_empty() && i + 1 != self.rules.len() {
                return Err(Error::invariant(format!(
                    "default rule at position {i} is not last"
                )));
            }
        }
        Ok(())
    }
}

/// One accepted greedy insertion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeroStep {
    pub rule: Rule,
    pub position: usize,
    pub gain: f64,
}

/// Weighted fraction of rows (having `target`) predicted correctly.
pub fn accuracy(list: &RuleList, rows: &[Case], target: &str) -> f64 {
    let (mut total, mut correct) = (0u64, 0u64);
    for row in rows {
        let Some(actual) = row.literals.get(target) else {
            continue;
        };
        total += row.weight;
        if list.predict(&row.literals, target).as_ref() == Some(actual) {
            correct += row.weight;
        }
    }
    if total == 0 {
        0.0
    } else {
        correct as f64 / total as f64
    }
}

fn candidate_target(candidate: &Rule) -> &str {
    candidate
        .conclusion
        .attributes()
        .next()
        .expect("candidate rule has a conclusion")
}

/// Accuracy change from inserting `candidate` at `position`. The target is the
/// attribute of the candidate's conclusion.
pub fn information_gain(list: &RuleList, candidate: &Rule, position: usize, rows: &[Case]) -> f64 {
    let target = candidate_target(candidate);
    let mut extended = list.clone();
    extended
        .rules
        .insert(position.min(list.rules.len()), candidate.clone());
    accuracy(&extended, rows, target) - accuracy(list, rows, target)
}

/// Gain of a hypothetical rule that predicts every row matching the
/// candidate's premise correctly, inserted at the top of the list.
pub fn max_information_gain(candidate: &Rule, list: &RuleList, rows: &[Case]) -> f64 {
    let target = candidate_target(candidate);
    let (mut total, mut fixable) = (0u64, 0u64);
    for row in rows {
        let Some(actual) = row.literals.get(target) else {
            continue;
        };
        total += row.weight;
        if candidate.applies_to(&row.literals)
            && list.predict(&row.literals, target).as_ref() != Some(actual)
        {
            fixable += row.weight;
        }
    }
    if total == 0 {
        0.0
    } else {
        fixable as f64 / total as f64
    }
}

pub fn learn_hero(rows: &[Case], target: &str) -> Result<RuleList> {
    learn_hero_with_trace(rows, target).map(|(list, _)| list)
}

/// Learns a rule list and returns the accepted greedy steps in order.
/// Rows without a value for `target` are ignored.
pub fn learn_hero_with_trace(rows: &[Case], target: &str) -> Result<(RuleList, Vec<HeroStep>)> {
    if rows.is_empty() {
        return Err(Error::input("no training rows"));
    }
    let data = Encoded::new(rows, target)?;
    let mut state = ListState::default();
    let mut trace = Vec::new();
    while let Some(best) = data.best_step(&state) {
        if best.gain <= 0 {
            break;
        }
        state.rules.insert(
            best.position,
            EncodedRule {
                premise: best.premise.clone(),
                value: best.value,
            },
        );
        trace.push(HeroStep {
            rule: data.decode(&best.premise, best.value),
            position: best.position,
            gain: best.gain as f64 / data.total as f64,
        });
    }
    let list = RuleList {
        target: Some(target.to_string()),
        rules: state
            .rules
            .iter()
            .map(|r| data.decode(&r.premise, r.value))
            .collect(),
    };
    Ok((list, trace))
}

/// Learns one list per attribute of the model and merges rules with
/// identical premises into multi-literal conclusions.
pub fn learn_hero_model(model: &CaseModel) -> Result<RuleList> {
    let lists = model
        .attributes()
        .keys()
        .map(|a| learn_hero(model.cases(), a))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_rule_lists(&lists))
}

/// Merges single-target lists. Rules sharing a premise are combined and
/// ordered by their earliest position; if that would change the relative
/// order of any target's rules, the lists are concatenated instead with only
/// the defaults combined.
pub fn merge_rule_lists(lists: &[RuleList]) -> RuleList {
    let mut by_premise: BTreeMap<&LiteralSet, (usize, LiteralSet)> = BTreeMap::new();
    let mut consistent = true;
    for list in lists {
        for (pos, rule) in list.rules.iter().enumerate() {
            let entry = by_premise
                .entry(&rule.premise)
                .or_insert((pos, LiteralSet::new()));
            entry.0 = entry.0.min(pos);
            match entry.1.union(&rule.conclusion) {
                Some(u) if u.len() == entry.1.len() + rule.conclusion.len() => entry.1 = u,
                _ => consistent = false,
            }
        }
    }
    if consistent {
        let mut merged: Vec<(usize, &LiteralSet, LiteralSet)> = by_premise
            .into_iter()
            .map(|(p, (pos, c))| (pos, p, c))
            .collect();
        merged.sort_by(|a, b| (a.1.is_empty(), a.0, a.1).cmp(&(b.1.is_empty(), b.0, b.1)));
        let candidate = RuleList {
            target: None,
            rules: merged
                .into_iter()
                .map(|(_, p, c)| Rule::new(p.clone(), c))
                .collect(),
        };
        if lists.iter().all(|l| preserves_order(&candidate, l)) {
            return candidate;
        }
    }
    let mut rules: Vec<Rule> = lists
        .iter()
        .flat_map(|l| l.rules.iter().filter(|r| !r.premise.is_empty()).cloned())
        .collect();
    let mut default = LiteralSet::new();
    for r in lists
        .iter()
        .flat_map(|l| &l.rules)
        .filter(|r| r.premise.is_empty())
    {
        if let Some(u) = default.union(&r.conclusion) {
            default = u;
        }
    }
    if !default.is_empty() {
        rules.push(Rule::new(LiteralSet::new(), default));
    }
    RuleList {
        target: None,
        rules,
    }
}

fn preserves_order(merged: &RuleList, original: &RuleList) -> bool {
    let Some(target) = original.target.as_deref() else {
        return false;
    };
    let projected: Vec<(&LiteralSet, Option<&Value>)> = merged
        .rules
        .iter()
        .filter(|r| r.conclusion.has_attribute(target))
        .map(|r| (&r.premise, r.conclusion.get(target)))
        .collect();
    let expected: Vec<(&LiteralSet, Option<&Value>)> = original
        .rules
        .iter()
        .map(|r| (&r.premise, r.conclusion.get(target)))
        .collect();
    projected == expected
}

type LitId = u32;

struct EncodedRule {
    premise: Vec<LitId>,
    value: usize,
}

#[derive(Default)]
struct ListState {
    rules: Vec<EncodedRule>,
}

/// Training rows restricted to those carrying the target, with literals as ids.
struct Encoded {
    target: String,
    values: Vec<Value>,
    literals: Vec<Literal>,
    lit_attr: Vec<usize>,
    /// Per row, per non-target attribute: the literal the row makes true.
    row_lits: Vec<Vec<Option<LitId>>>,
    labels: Vec<usize>,
    weights: Vec<u64>,
    total: u64,
}

#[derive(Debug, Clone)]
struct Candidate {
    premise: Vec<LitId>,
    value: usize,
    position: usize,
    gain: i64,
    max_gain: u64,
}

impl Candidate {
    /// Greater is better: higher gain, smaller premise, higher maximum gain,
    /// then the canonical order of premise, value and position.
    fn rank(&self, other: &Candidate) -> Ordering {
        self.gain
            .cmp(&other.gain)
            .then(other.premise.len().cmp(&self.premise.len()))
            .then(self.max_gain.cmp(&other.max_gain))
            .then(other.premise.cmp(&self.premise))
            .then(other.value.cmp(&self.value))
            .then(other.position.cmp(&self.position))
    }
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.rank(&a) == Ordering::Greater {
            b
        } else {
            a
        }),
        (a, None) => a,
        (None, b) => b,
    }
}

struct Node {
    premise: Vec<LitId>,
    rows: Vec<u32>,
}

impl Encoded {
    fn new(rows: &[Case], target: &str) -> Result<Self> {
        let kept: Vec<&Case> = rows
            .iter()
            .filter(|c| c.literals.has_attribute(target) && c.weight > 0)
            .collect();
        if kept.is_empty() {
            return Err(Error::input(format!(
                "no row has a value for target {target}"
            )));
        }
        let values: Vec<Value> = kept
            .iter()
            .map(|c| c.literals.get(target).expect("filtered").clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let literals: Vec<Literal> = kept
            .iter()
            .flat_map(|c| c.literals.iter())
            .filter(|l| l.attribute != target)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let attrs: Vec<String> = literals
            .iter()
            .map(|l| l.attribute.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let lit_attr: Vec<usize> = literals
            .iter()
            .map(|l| attrs.binary_search(&l.attribute).expect("known attribute"))
            .collect();
        let mut row_lits = Vec::with_capacity(kept.len());
        let mut labels = Vec::with_capacity(kept.len());
        for c in &kept {
            let mut row = vec![None; attrs.len()];
            for lit in c.literals.iter().filter(|l| l.attribute != target) {
                let id = literals.binary_search(&lit).expect("known literal");
                row[lit_attr[id]] = Some(id as LitId);
            }
            row_lits.push(row);
            let y = c.literals.get(target).expect("filtered");
            labels.push(values.binary_search(y).expect("known value"));
        }
        let weights: Vec<u64> = kept.iter().map(|c| c.weight).collect();
        let total = weights.iter().sum();
        Ok(Encoded {
            target: target.to_string(),
            values,
            literals,
            lit_attr,
            row_lits,
            labels,
            weights,
            total,
        })
    }

    fn decode(&self, premise: &[LitId], value: usize) -> Rule {
        let premise: LiteralSet = premise
            .iter()
            .map(|&l| {
                let lit = &self.literals[l as usize];
                (lit.attribute.clone(), lit.value.clone())
            })
            .collect();
        let conclusion: LiteralSet = [(self.target.clone(), self.values[value].clone())]
            .into_iter()
            .collect();
        Rule::new(premise, conclusion)
    }

    fn matches(&self, row: usize, premise: &[LitId]) -> bool {
        premise
            .iter()
            .all(|&l| self.row_lits[row][self.lit_attr[l as usize]] == Some(l))
    }

    /// Index of the first firing rule per row (`rules.len()` if none) and
    /// whether that rule predicts the row's label.
    fn firing(&self, state: &ListState) -> (Vec<usize>, Vec<bool>) {
        let n = state.rules.len();
        let mut fire = Vec::with_capacity(self.labels.len());
        let mut correct = Vec::with_capacity(self.labels.len());
        for r in 0..self.labels.len() {
            let f = state
                .rules
                .iter()
                .position(|rule| self.matches(r, &rule.premise))
                .unwrap_or(n);
            fire.push(f);
            correct.push(f < n && state.rules[f].value == self.labels[r]);
        }
        (fire, correct)
    }

    fn best_step(&self, state: &ListState) -> Option<Candidate> {
        let (fire, correct) = self.firing(state);
        let n_rules = state.rules.len();
        let has_default = state.rules.iter().any(|r| r.premise.is_empty());
        let eval = |node: &Node| -> (Option<Candidate>, u64) {
            self.evaluate(node, &fire, &correct, n_rules, has_default)
        };

        let root = Node {
            premise: Vec::new(),
            rows: (0..self.labels.len() as u32).collect(),
        };
        let (mut best, root_max) = eval(&root);
        let best_gain = |b: &Option<Candidate>| b.as_ref().map_or(0, |c| c.gain.max(0)) as u64;
        let mut frontier: Vec<Node> = if root_max > best_gain(&best) {
            vec![root]
        } else {
            Vec::new()
        };

        while !frontier.is_empty() {
            let children: Vec<Node> = frontier.iter().flat_map(|n| self.children(n)).collect();
            let scored: Vec<(Option<Candidate>, u64)> = children.par_iter().map(eval).collect();
            for (cand, _) in &scored {
                best = better(best, cand.clone());
            }
            let bound = best_gain(&best);
            frontier = children
                .into_iter()
                .zip(scored)
                .filter_map(|(node, (_, max_gain))| (max_gain > bound).then_some(node))
                .collect();
        }
        best
    }

    /// Specializations adding one literal on an attribute after the premise's last.
    fn children(&self, node: &Node) -> Vec<Node> {
        let start = node
            .premise
            .last()
            .map_or(0, |&l| self.lit_attr[l as usize] + 1);
        let mut by_lit: BTreeMap<LitId, Vec<u32>> = BTreeMap::new();
        for &r in &node.rows {
            for lit in self.row_lits[r as usize][start..].iter().flatten() {
                by_lit.entry(*lit).or_default().push(r);
            }
        }
        by_lit
            .into_iter()
            .map(|(lit, rows)| {
                let mut premise = node.premise.clone();
                premise.push(lit);
                Node { premise, rows }
            })
            .collect()
    }

    /// Best (value, position) for the node's premise, and its maximum gain.
    fn evaluate(
        &self,
        node: &Node,
        fire: &[usize],
        correct: &[bool],
        n_rules: usize,
        has_default: bool,
    ) -> (Option<Candidate>, u64) {
        let max_gain: u64 = node
            .rows
            .iter()
            .filter(|&&r| !correct[r as usize])
            .map(|&r| self.weights[r as usize])
            .sum();
        let n_values = self.values.len();
        // delta[f * n_values + v]: gain contribution of rows first fired at f.
        let mut delta = vec![0i64; (n_rules + 1) * n_values];
        for &r in &node.rows {
            let r = r as usize;
            let w = self.weights[r] as i64;
            let base = fire[r] * n_values;
            if correct[r] {
                for v in 0..n_values {
                    delta[base + v] -= w;
                }
            }
            delta[base + self.labels[r]] += w;
        }
        let positions: Vec<usize> = if node.premise.is_empty() {
            if has_default {
                return (None, max_gain);
            }
            vec![n_rules]
        } else {
            (0..=n_rules).collect()
        };
        let mut best: Option<Candidate> = None;
        for v in 0..n_values {
            // gain at position i = sum of delta over f >= i.
            let mut suffix = vec![0i64; n_rules + 2];
            for f in (0..=n_rules).rev() {
                suffix[f] = suffix[f + 1] + delta[f * n_values + v];
            }
            for &p in &positions {
                let cand = Candidate {
                    premise: node.premise.clone(),
                    value: v,
                    position: p,
                    gain: suffix[p],
                    max_gain,
                };
                best = better(best, Some(cand));
            }
        }
        (best, max_gain)
    }
}
