//! Prediction with learned theories and rule lists, evaluation metrics, and
//! argumentation semantics over the learned rules.

mod attack;
mod metrics;

use crate::case_model::Argument;
use crate::hero::RuleList;
use crate::literal::{LiteralSet, Value};
use crate::pruned_search::Theory;

pub use attack::{
    attack_graph, detect_self_attack, grounded_extension, is_admissible, is_conflict_free,
    preferred_extensions, theory_rules, AttackGraph, ChainArgument, SelfAttack, DEFAULT_MAX_CHAIN,
    MAX_PREFERRED_NODES,
};
pub use metrics::{evaluate, ClassMetrics, EvalReport};

/// An argument's claim about `target` is defeated by an applicable exception
/// that concludes a different `target` value and is itself undefeated.
/// Exceptions to a merged argument that contest only its other conclusion
/// literals leave the `target` claim standing.
fn undefeated(arg: &Argument, instance: &LiteralSet, target: &str) -> bool {
    let claim = arg.conclusion.get(target);
    !arg.exceptions.iter().any(|e| {
        e.premise.is_subset_of(instance)
            && e.conclusion.get(target).is_some_and(|v| Some(v) != claim)
            && undefeated(e, instance, target)
    })
}

/// The value of `target` concluded by the most specific applicable,
/// undefeated argument; ties go to higher support, then the smaller premise
/// and conclusion in canonical order. `None` means the theory abstains.
pub fn predict_theory(theory: &Theory, instance: &LiteralSet, target: &str) -> Option<Value> {
    let instance = instance.without(target);
    theory
        .arguments_for(target)
        .filter(|a| a.premise.is_subset_of(&instance) && undefeated(a, &instance, target))
        .max_by(|a, b| {
            (a.premise.len(), a.support)
                .cmp(&(b.premise.len(), b.support))
                .then_with(|| (&b.premise, &b.conclusion).cmp(&(&a.premise, &a.conclusion)))
        })
        .and_then(|a| a.conclusion.get(target).cloned())
}

/// First rule, in list order, that applies and concludes about `target`.
pub fn predict_rule_list(list: &RuleList, instance: &LiteralSet, target: &str) -> Option<Value> {
    list.predict(&instance.without(target), target)
}
