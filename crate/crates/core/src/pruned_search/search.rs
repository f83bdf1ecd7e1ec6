//! Level-wise, coherence-pruned enumeration of premises for one conclusion.
//!
//! If (P, c) is incoherent then so is (P', c) for every P' ⊇ P, so a premise
//! of size i+1 can only be coherent when all of its size-i subsets are. The
//! candidates of the next level are therefore built Apriori-style: two
//! coherent premises sharing all but their last literal (so differing in
//! exactly two literals) are joined, and the union is kept only if every one
//! of its size-i subsets is coherent. Any coherent premise of size i+1 is
//! produced this way from its two lexicographically largest subsets, so no
//! coherent argument is lost.

use std::collections::HashMap;

use crate::case_model::{Status, TieRule};
use crate::index::{IndexedModel, LitId};

/// One coherent (premise, single-literal conclusion) pair.
#[derive(Debug, Clone)]
pub(crate) struct Found {
    pub premise: Vec<LitId>,
    pub conclusion: LitId,
    pub status: Status,
    pub support: u64,
    /// The conclusion holds in every most preferred premise case.
    pub decisive: bool,
}

struct Node {
    premise: Vec<LitId>,
    /// Cases satisfying premise ∪ {conclusion}.
    pos: Vec<u32>,
    /// Cases satisfying the premise.
    full: Vec<u32>,
}

pub(crate) fn search_conclusion(
    ix: &IndexedModel,
    conclusion: LitId,
    max_premise_size: usize,
    ties: TieRule,
) -> Vec<Found> {
    let concl_attr = ix.lit_attr[conclusion as usize];
    let full: Vec<u32> = (0..ix.n_cases() as u32).collect();
    let pos: Vec<u32> = full
        .iter()
        .copied()
        .filter(|&c| ix.case_has(c as usize, conclusion))
        .collect();
    if pos.is_empty() {
        return Vec::new();
    }

    let mut out = Vec::new();
    let root = Node {
        premise: Vec::new(),
        pos,
        full,
    };
    out.push(classify(ix, &root, conclusion, ties));

    // Level 1: single literals occurring in some case that supports the conclusion.
    let mut frontier: Vec<Node> = Vec::new();
    if max_premise_size >= 1 {
        let mut lits: Vec<LitId> = root
            .pos
            .iter()
            .flat_map(|&c| ix.case_lits[c as usize].iter().flatten().copied())
            .filter(|&l| ix.lit_attr[l as usize] != concl_attr)
            .collect();
        lits.sort_unstable();
        lits.dedup();
        for l in lits {
            let node = extend(ix, &root, l);
            out.push(classify(ix, &node, conclusion, ties));
            frontier.push(node);
        }
    }

    for size in 2..=max_premise_size {
        if frontier.len() < 2 {
            break;
        }
        let known: HashMap<&[LitId], usize> = frontier
            .iter()
            .enumerate()
            .map(|(i, n)| (n.premise.as_slice(), i))
            .collect();
        let mut next: Vec<Node> = Vec::new();
        let mut start = 0;
        while start < frontier.len() {
            let prefix = &frontier[start].premise[..size - 2];
            let mut end = start + 1;
            while end < frontier.len() && &frontier[end].premise[..size - 2] == prefix {
                end += 1;
            }
            for i in start..end {
                for j in i + 1..end {
                    let x = &frontier[i];
                    let y_last = *frontier[j].premise.last().expect("non-empty premise");
                    let x_last = *x.premise.last().expect("non-empty premise");
                    if ix.lit_attr[x_last as usize] == ix.lit_attr[y_last as usize] {
                        continue;
                    }
                    let mut candidate = x.premise.clone();
                    candidate.push(y_last);
                    if !all_subsets_known(&candidate, &known) {
                        continue;
                    }
                    let node = extend(ix, x, y_last);
                    if node.pos.is_empty() {
                        continue;
                    }
                    out.push(classify(ix, &node, conclusion, ties));
                    next.push(node);
                }
            }
            start = end;
        }
        frontier = next;
    }
    out
}

/// Every subset obtained by dropping one of the first `len - 2` literals is
/// in the previous level (the last two drops are the join parents).
fn all_subsets_known(candidate: &[LitId], known: &HashMap<&[LitId], usize>) -> bool {
    let n = candidate.len();
    let mut buf = Vec::with_capacity(n - 1);
    (0..n.saturating_sub(2)).all(|skip| {
        buf.clear();
        buf.extend(
            candidate
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &l)| l),
        );
        known.contains_key(buf.as_slice())
    })
}

fn extend(ix: &IndexedModel, parent: &Node, lit: LitId) -> Node {
    let mut premise = parent.premise.clone();
    premise.push(lit);
    let filter = |cases: &[u32]| -> Vec<u32> {
        cases
            .iter()
            .copied()
            .filter(|&c| ix.case_has(c as usize, lit))
            .collect()
    };
    Node {
        premise,
        pos: filter(&parent.pos),
        full: filter(&parent.full),
    }
}

fn classify(ix: &IndexedModel, node: &Node, conclusion: LitId, ties: TieRule) -> Found {
    let support = node
        .full
        .iter()
        .map(|&c| ix.weights[c as usize])
        .max()
        .unwrap_or(0);
    let top_pos = node
        .pos
        .iter()
        .filter(|&&c| ix.weights[c as usize] == support)
        .count();
    let top_full = node
        .full
        .iter()
        .filter(|&&c| ix.weights[c as usize] == support)
        .count();
    let decisive = top_pos == top_full;
    let presumptive = match ties {
        TieRule::Existential => top_pos > 0,
        TieRule::Universal => decisive,
    };
    let status = if node.pos.len() == node.full.len() {
        Status::Conclusive
    } else if presumptive {
        Status::PresumptivelyValid
    } else {
        Status::Coherent
    };
    Found {
        premise: node.premise.clone(),
        conclusion,
        status,
        support,
        decisive,
    }
}
