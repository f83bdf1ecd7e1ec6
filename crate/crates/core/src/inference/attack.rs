//! Attack graphs over rules and forward-chained compositions of rules, with
//! grounded and (brute-force) preferred semantics.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hero::Rule;
use crate::literal::{Literal, LiteralSet};
use crate::pruned_search::Theory;

pub const DEFAULT_MAX_CHAIN: usize = 3;
pub const MAX_PREFERRED_NODES: usize = 20;

/// A single rule (one step) or a chain of rules where each later step is fed
/// by conclusions of earlier ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainArgument {
    /// Indices into the rule slice, in chaining order.
    pub steps: Vec<usize>,
    /// Literals assumed from outside the chain.
    pub premise: LiteralSet,
    /// Conclusions of every step but the last.
    pub intermediates: BTreeSet<Literal>,
    pub conclusion: LiteralSet,
}

impl ChainArgument {
    pub fn is_composite(&self) -> bool {
        self.steps.len() > 1
    }

    fn attacks(&self, other: &ChainArgument) -> bool {
        self.conclusion.iter().any(|c| {
            other.conclusion.iter().any(|o| c.conflicts_with(&o))
                || other.intermediates.iter().any(|o| c.conflicts_with(o))
        })
    }

    fn known(&self) -> impl Iterator<Item = Literal> + '_ {
        self.premise
            .iter()
            .chain(self.intermediates.iter().cloned())
            .chain(self.conclusion.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackGraph {
    pub nodes: Vec<ChainArgument>,
    /// `(attacker, target)` node indices, sorted.
    pub attacks: Vec<(usize, usize)>,
}

impl AttackGraph {
    /// Builds a graph from explicit edges, mostly for testing the semantics.
    pub fn from_edges(n: usize, attacks: &[(usize, usize)]) -> Result<Self> {
        if let Some(&(a, b)) = attacks.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::input(format!("edge ({a}, {b}) outside {n} nodes")));
        }
        let nodes = (0..n)
            .map(|i| ChainArgument {
                steps: vec![i],
                premise: LiteralSet::new(),
                intermediates: BTreeSet::new(),
                conclusion: LiteralSet::new(),
            })
            .collect();
        let mut attacks = attacks.to_vec();
        attacks.sort_unstable();
        attacks.dedup();
        Ok(AttackGraph { nodes, attacks })
    }

    fn attackers(&self) -> Vec<Vec<usize>> {
        let mut by_target = vec![Vec::new(); self.nodes.len()];
        for &(a, t) in &self.attacks {
            by_target[t].push(a);
        }
        by_target
    }

    pub fn attacks(&self, a: usize, b: usize) -> bool {
        self.attacks.binary_search(&(a, b)).is_ok()
    }
}

/// Top-level arguments of a theory read as rules.
pub fn theory_rules(theory: &Theory) -> Vec<Rule> {
    theory
        .arguments
        .iter()
        .map(|a| Rule::new(a.premise.clone(), a.conclusion.clone()))
        .collect()
}

/// Extends `chain` with rule `j` if `j` is fed by one of the chain's
/// conclusions, its other premise literals do not contradict anything known,
/// and it concludes something new.
fn extend(chain: &ChainArgument, j: usize, rule: &Rule) -> Option<ChainArgument> {
    if chain.steps.contains(&j) {
        return None;
    }
    let known: BTreeSet<Literal> = chain.known().collect();
    let derived = |l: &Literal| chain.conclusion.contains(l) || chain.intermediates.contains(l);
    if !rule.premise.iter().any(|l| derived(&l)) {
        return None;
    }
    let mut premise = chain.premise.clone();
    for l in rule.premise.iter() {
        if known.contains(&l) {
            continue;
        }
        if known.iter().any(|k| k.conflicts_with(&l)) {
            return None;
        }
        premise.insert(l).ok()?;
    }
    if rule.conclusion.iter().all(|c| known.contains(&c)) {
        return None;
    }
    let mut intermediates = chain.intermediates.clone();
    intermediates.extend(chain.conclusion.iter());
    let mut steps = chain.steps.clone();
    steps.push(j);
    Some(ChainArgument {
        steps,
        premise,
        intermediates,
        conclusion: rule.conclusion.clone(),
    })
}

/// Nodes are the rules plus every chain of up to `max_chain` rules; `X`
/// attacks `Y` when a conclusion of `X` conflicts with a conclusion or an
/// intermediate literal of `Y`. Self-loops are kept.
pub fn attack_graph(rules: &[Rule], max_chain: usize) -> AttackGraph {
    let mut nodes: Vec<ChainArgument> = rules
        .iter()
        .enumerate()
        .map(|(i, r)| ChainArgument {
            steps: vec![i],
            premise: r.premise.clone(),
            intermediates: BTreeSet::new(),
            conclusion: r.conclusion.clone(),
        })
        .collect();
    let mut layer: Vec<ChainArgument> = nodes.clone();
    for _ in 1..max_chain {
        let next: Vec<ChainArgument> = layer
            .iter()
            .flat_map(|c| {
                rules
                    .iter()
                    .enumerate()
                    .filter_map(move |(j, r)| extend(c, j, r))
            })
            .collect();
        nodes.extend(next.iter().cloned());
        layer = next;
    }
    let mut attacks = Vec::new();
    for (a, x) in nodes.iter().enumerate() {
        for (b, y) in nodes.iter().enumerate() {
            if x.attacks(y) {
                attacks.push((a, b));
            }
        }
    }
    AttackGraph { nodes, attacks }
}

/// Least fixed point of the defence function: repeatedly accept every node
/// whose attackers are all attacked by the accepted set.
pub fn grounded_extension(graph: &AttackGraph) -> BTreeSet<usize> {
    let attackers = graph.attackers();
    let n = graph.nodes.len();
    let mut accepted = vec![false; n];
    let mut defeated = vec![false; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            if !accepted[i] && attackers[i].iter().all(|&a| defeated[a]) {
                accepted[i] = true;
                changed = true;
            }
        }
        for &(a, t) in &graph.attacks {
            if accepted[a] && !defeated[t] {
                defeated[t] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).filter(|&i| accepted[i]).collect()
}

pub fn is_conflict_free(graph: &AttackGraph, set: &BTreeSet<usize>) -> bool {
    !graph
        .attacks
        .iter()
        .any(|(a, b)| set.contains(a) && set.contains(b))
}

/// Conflict-free and defends each member against all its attackers.
pub fn is_admissible(graph: &AttackGraph, set: &BTreeSet<usize>) -> bool {
    if !is_conflict_free(graph, set) {
        return false;
    }
    let attackers = graph.attackers();
    set.iter().all(|&m| {
        attackers[m]
            .iter()
            .all(|&a| set.iter().any(|&d| graph.attacks(d, a)))
    })
}

/// All maximal admissible sets, by exhaustive enumeration.
pub fn preferred_extensions(graph: &AttackGraph) -> Result<Vec<BTreeSet<usize>>> {
    let n = graph.nodes.len();
    if n > MAX_PREFERRED_NODES {
        return Err(Error::input(format!(
            "preferred semantics by enumeration is limited to {MAX_PREFERRED_NODES} nodes, got {n}"
        )));
    }
    let admissible: Vec<u32> = (0u32..1 << n)
        .filter(|&mask| {
            let set: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            is_admissible(graph, &set)
        })
        .collect();
    Ok(admissible
        .iter()
        .filter(|&&m| !admissible.iter().any(|&o| o != m && o & m == m))
        .map(|&m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SelfAttack {
    /// A chain whose conclusion conflicts with its own intermediate literals.
    Reflexive { chain: ChainArgument },
    /// Two chains of at least two rules attacking each other.
    Mutual {
        first: ChainArgument,
        second: ChainArgument,
    },
}

/// Self-attacking chains and mutually attacking composite chains. An empty
/// result means the rules can be evaluated under grounded semantics without
/// such conflicts.
pub fn detect_self_attack(rules: &[Rule], max_chain: usize) -> Vec<SelfAttack> {
    let graph = attack_graph(rules, max_chain);
    let mut out = Vec::new();
    for &(a, b) in &graph.attacks {
        if a == b {
            out.push(SelfAttack::Reflexive {
                chain: graph.nodes[a].clone(),
            });
        } else if a < b
            && graph.nodes[a].is_composite()
            && graph.nodes[b].is_composite()
            && graph.attacks(b, a)
        {
            out.push(SelfAttack::Mutual {
                first: graph.nodes[a].clone(),
                second: graph.nodes[b].clone(),
            });
        }
    }
    out
}
