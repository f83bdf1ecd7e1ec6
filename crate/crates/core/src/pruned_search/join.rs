//! Combining premises that differ in exactly two literals.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use crate::literal::{Literal, LiteralSet};

/// Unions of every pair of size-`i` premises whose symmetric difference has
/// exactly two literals, skipping unions that assign two values to one
/// attribute.
///
/// Two equal-size premises differ in exactly two literals iff removing one
/// literal from each leaves the same set, so pairs are found by bucketing on
/// those "premise minus one" keys rather than comparing all pairs.
pub fn join_premises(frontier: &[LiteralSet]) -> BTreeSet<LiteralSet> {
    let as_vecs: Vec<Vec<Literal>> = frontier.iter().map(|p| p.iter().collect()).collect();
    join_sorted(&as_vecs, |a: &Literal, b: &Literal| {
        a.attribute == b.attribute
    })
    .into_iter()
    .map(|lits| LiteralSet::try_from_literals(lits).expect("join output is consistent"))
    .collect()
}

/// Generic form of [`join_premises`] over sorted premise vectors.
/// `same_attribute` decides whether two distinct items would conflict.
pub(crate) fn join_sorted<T, F>(frontier: &[Vec<T>], same_attribute: F) -> BTreeSet<Vec<T>>
where
    T: Ord + Clone + Hash,
    F: Fn(&T, &T) -> bool,
{
    let mut buckets: HashMap<Vec<T>, Vec<T>> = HashMap::new();
    for premise in frontier {
        for j in 0..premise.len() {
            let mut key = premise.clone();
            let removed = key.remove(j);
            buckets.entry(key).or_default().push(removed);
        }
    }
    let mut out = BTreeSet::new();
    for (key, removed) in buckets {
        for (i, x) in removed.iter().enumerate() {
            for y in &removed[i + 1..] {
                if x == y || same_attribute(x, y) {
                    continue;
                }
                let mut union = key.clone();
                union.push(x.clone());
                union.push(y.clone());
                union.sort();
                out.insert(union);
            }
        }
    }
    out
}
