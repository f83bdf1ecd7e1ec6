//! Post-processing of the raw search output: relevance filtering, merging of
//! same-premise arguments and exception annotation.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::case_model::{Argument, Status};
use crate::error::{Error, Result};
use crate::literal::{Literal, LiteralSet};

/// Integer form of an argument used by the post-processing passes.
#[derive(Debug, Clone)]
pub(crate) struct Draft {
    pub premise: Vec<u32>,
    pub conclusion: Vec<u32>,
    pub status: Status,
    pub support: u64,
}

/// All proper subsets of a sorted premise, the empty set included.
fn proper_subsets(premise: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    let n = premise.len();
    let full: u64 = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..full).map(move |mask| {
        premise
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &l)| l)
            .collect()
    })
}

/// Relevance over single-conclusion drafts.
///
/// A draft is relevant when no draft with a strictly smaller premise has the
/// same conclusion, or when it is an exception (strictly larger premise,
/// conflicting conclusion) to a relevant draft. Exceptions always have larger
/// premises than what they attack, so one pass in order of premise size
/// reaches the fixpoint.
pub(crate) fn relevant_mask(drafts: &[Draft], lit_attr: &[usize]) -> Vec<bool> {
    let concl = |d: &Draft| d.conclusion[0];
    let known: HashSet<(&[u32], u32)> = drafts
        .iter()
        .map(|d| (d.premise.as_slice(), concl(d)))
        .collect();

    let mut order: Vec<usize> = (0..drafts.len()).collect();
    order.sort_by_key(|&i| drafts[i].premise.len());

    let mut kept = vec![false; drafts.len()];
    // (premise, conclusion attribute) -> conclusion literals of kept drafts
    let mut kept_by_attr: HashMap<(Vec<u32>, usize), Vec<u32>> = HashMap::new();
    for i in order {
        let d = &drafts[i];
        let c = concl(d);
        let attr = lit_attr[c as usize];
        let mut root = true;
        let mut exception = false;
        for sub in proper_subsets(&d.premise) {
            if root && known.contains(&(sub.as_slice(), c)) {
                root = false;
            }
            if !exception {
                if let Some(vals) = kept_by_attr.get(&(sub, attr)) {
                    exception = vals.iter().any(|&v| v != c);
                }
            }
            if !root && exception {
                break;
            }
        }
        if root || exception {
            kept[i] = true;
            kept_by_attr
                .entry((d.premise.clone(), attr))
                .or_default()
                .push(c);
        }
    }
    kept
}

/// Merges drafts with equal premises into one draft with the union of their
/// conclusions. The merged status is the weakest of the parts.
pub(crate) fn merge_drafts(drafts: Vec<Draft>, lit_attr: &[usize]) -> Result<Vec<Draft>> {
    let mut groups: BTreeMap<Vec<u32>, Draft> = BTreeMap::new();
    for d in drafts {
        match groups.get_mut(&d.premise) {
            None => {
                groups.insert(d.premise.clone(), d);
            }
            Some(g) => {
                for &c in &d.conclusion {
                    let attr = lit_attr[c as usize];
                    match g.conclusion.iter().find(|&&x| lit_attr[x as usize] == attr) {
                        Some(&x) if x == c => {}
                        Some(_) => {
                            return Err(Error::invariant(format!(
                                "merging same-premise arguments produced conflicting conclusions on attribute #{attr}"
                            )))
                        }
                        None => g.conclusion.push(c),
                    }
                }
                g.conclusion.sort_unstable();
                g.status = g.status.min(d.status);
                g.support = g.support.max(d.support);
            }
        }
    }
    Ok(groups.into_values().collect())
}

/// For each draft (premises unique), the indices of its direct exception
/// candidates: drafts with a strictly larger premise and a conflicting conclusion.
pub(crate) fn exception_index(drafts: &[Draft], lit_attr: &[usize]) -> Vec<Vec<usize>> {
    let by_premise: HashMap<&[u32], usize> = drafts
        .iter()
        .enumerate()
        .map(|(i, d)| (d.premise.as_slice(), i))
        .collect();
    let mut children = vec![Vec::new(); drafts.len()];
    for (e, d) in drafts.iter().enumerate() {
        for sub in proper_subsets(&d.premise) {
            if let Some(&a) = by_premise.get(sub.as_slice()) {
                if conflicts(&drafts[a].conclusion, &d.conclusion, lit_attr) {
                    children[a].push(e);
                }
            }
        }
    }
    for c in &mut children {
        c.sort_unstable();
    }
    children
}

pub(crate) fn conflicts(a: &[u32], b: &[u32], lit_attr: &[usize]) -> bool {
    a.iter().any(|&x| {
        b.iter()
            .any(|&y| x != y && lit_attr[x as usize] == lit_attr[y as usize])
    })
}

/// Materializes arguments with exceptions nested up to `depth` levels.
pub(crate) fn materialize(
    drafts: &[Draft],
    children: &[Vec<usize>],
    depth: usize,
    to_set: &dyn Fn(&[u32]) -> LiteralSet,
) -> Vec<Argument> {
    let mut memo: HashMap<(usize, usize), Vec<Argument>> = HashMap::new();
    (0..drafts.len())
        .map(|i| build(i, depth, drafts, children, to_set, &mut memo))
        .collect()
}

fn build(
    i: usize,
    depth: usize,
    drafts: &[Draft],
    children: &[Vec<usize>],
    to_set: &dyn Fn(&[u32]) -> LiteralSet,
    memo: &mut HashMap<(usize, usize), Vec<Argument>>,
) -> Argument {
    let d = &drafts[i];
    let exceptions = if depth == 0 || d.status == Status::Conclusive {
        Vec::new()
    } else if let Some(done) = memo.get(&(i, depth)) {
        done.clone()
    } else {
        let ex: Vec<Argument> = children[i]
            .iter()
            .map(|&e| build(e, depth - 1, drafts, children, to_set, memo))
            .collect();
        memo.insert((i, depth), ex.clone());
        ex
    };
    Argument {
        premise: to_set(&d.premise),
        conclusion: to_set(&d.conclusion),
        status: d.status,
        support: d.support,
        exceptions,
    }
}

/// Literal interner for running the passes on caller-supplied arguments.
struct Interner {
    ids: BTreeMap<Literal, u32>,
    lits: Vec<Literal>,
    lit_attr: Vec<usize>,
}

impl Interner {
    fn new<'a>(args: impl Iterator<Item = &'a Argument>) -> Self {
        let mut all: Vec<Literal> = Vec::new();
        for a in args {
            all.extend(a.premise.iter());
            all.extend(a.conclusion.iter());
        }
        all.sort();
        all.dedup();
        let mut attrs = BTreeMap::new();
        for l in &all {
            let n = attrs.len();
            attrs.entry(l.attribute.clone()).or_insert(n);
        }
        let lit_attr = all.iter().map(|l| attrs[&l.attribute]).collect();
        let ids = all
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        Interner {
            ids,
            lits: all,
            lit_attr,
        }
    }

    fn encode(&self, set: &LiteralSet) -> Vec<u32> {
        set.iter().map(|l| self.ids[&l]).collect()
    }

    fn decode(&self, ids: &[u32]) -> LiteralSet {
        ids.iter()
            .map(|&i| {
                let l = &self.lits[i as usize];
                (l.attribute.clone(), l.value.clone())
            })
            .collect()
    }

    fn draft(&self, a: &Argument) -> Draft {
        Draft {
            premise: self.encode(&a.premise),
            conclusion: self.encode(&a.conclusion),
            status: a.status,
            support: a.support,
        }
    }
}

/// Keeps exactly the relevant arguments.
///
/// An argument is relevant if no presumptively valid argument with a strictly
/// smaller premise has the same conclusion, or if it is an exception to a
/// relevant argument (strictly larger premise, conflicting conclusion). Input
/// conclusions must be single literals; the input order is preserved.
pub fn filter_relevant(args: &[Argument]) -> Result<Vec<Argument>> {
    if let Some(a) = args.iter().find(|a| a.conclusion.len() != 1) {
        return Err(Error::input(format!(
            "relevance filtering expects single-literal conclusions, got {a}"
        )));
    }
    let interner = Interner::new(args.iter());
    let drafts: Vec<Draft> = args.iter().map(|a| interner.draft(a)).collect();
    let mask = relevant_mask(&drafts, &interner.lit_attr);
    Ok(args
        .iter()
        .zip(mask)
        .filter(|(_, keep)| *keep)
        .map(|(a, _)| a.clone())
        .collect())
}

/// Merges arguments with equal premises into one argument whose conclusion is
/// the union of theirs. A conflicting union is an internal invariant violation.
/// Output is ordered by premise.
pub fn merge_same_premise(args: &[Argument]) -> Result<Vec<Argument>> {
    let interner = Interner::new(args.iter());
    let drafts: Vec<Draft> = args.iter().map(|a| interner.draft(a)).collect();
    let mut exceptions: BTreeMap<LiteralSet, Vec<Argument>> = BTreeMap::new();
    for a in args {
        let slot = exceptions.entry(a.premise.clone()).or_default();
        for e in &a.exceptions {
            if !slot.contains(e) {
                slot.push(e.clone());
            }
        }
    }
    let merged = merge_drafts(drafts, &interner.lit_attr)?;
    Ok(merged
        .iter()
        .map(|d| {
            let premise = interner.decode(&d.premise);
            let exceptions = exceptions.remove(&premise).unwrap_or_default();
            Argument {
                premise,
                conclusion: interner.decode(&d.conclusion),
                status: d.status,
                support: d.support,
                exceptions,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lits;

    fn pv(premise: LiteralSet, conclusion: LiteralSet) -> Argument {
        Argument {
            status: Status::PresumptivelyValid,
            ..Argument::new(premise, conclusion)
        }
    }

    #[test]
    fn more_specific_same_conclusion_is_dropped() {
        let args = vec![
            pv(lits! { "a" => true }, lits! { "d" => true }),
            pv(
                lits! { "a" => true, "b" => true, "c" => true },
                lits! { "d" => true },
            ),
        ];
        let kept = filter_relevant(&args).unwrap();
        assert_eq!(kept, vec![args[0].clone()]);
    }

    #[test]
    fn exception_chain_is_kept() {
        let args = vec![
            pv(lits! { "a" => true }, lits! { "d" => true }),
            pv(lits! { "a" => true, "b" => true }, lits! { "d" => false }),
            pv(
                lits! { "a" => true, "b" => true, "c" => true },
                lits! { "d" => true },
            ),
        ];
        assert_eq!(filter_relevant(&args).unwrap(), args);
    }

    #[test]
    fn single_argument_is_relevant() {
        let args = vec![pv(lits! { "a" => true }, lits! { "d" => true })];
        assert_eq!(filter_relevant(&args).unwrap(), args);
    }

    #[test]
    fn merge_defaults() {
        let args = vec![
            pv(lits! {}, lits! { "innocent" => true }),
            pv(lits! {}, lits! { "guilty" => false }),
        ];
        let merged = merge_same_premise(&args).unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(
            merged[0].conclusion,
            lits! { "innocent" => true, "guilty" => false }
        );
    }

    #[test]
    fn merge_keeps_distinct_premises_apart() {
        let args = vec![
            pv(lits! { "a" => true }, lits! { "d" => true }),
            pv(lits! { "b" => true }, lits! { "d" => true }),
        ];
        assert_eq!(merge_same_premise(&args).unwrap().len(), 2);
    }

    #[test]
    fn merge_three_into_one() {
        let args = vec![
            pv(lits! { "a" => true }, lits! { "x" => true }),
            pv(lits! { "a" => true }, lits! { "y" => true }),
            Argument {
                status: Status::Conclusive,
                ..Argument::new(lits! { "a" => true }, lits! { "z" => true })
            },
        ];
        let merged = merge_same_premise(&args).unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].conclusion.len(), 3);
        assert_eq!(merged[0].status, Status::PresumptivelyValid);
    }

    #[test]
    fn conflicting_merge_is_an_invariant_violation() {
        let args = vec![
            pv(lits! { "a" => true }, lits! { "d" => true }),
            pv(lits! { "a" => true }, lits! { "d" => false }),
        ];
        let err = merge_same_premise(&args).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn subsets_enumeration() {
        let subs: Vec<Vec<u32>> = proper_subsets(&[1, 2]).collect();
        assert_eq!(subs, vec![vec![], vec![1], vec![2]]);
    }
}
