mod common;

use std::collections::BTreeSet;

use arglearn::inference::predict_theory;
use arglearn::pruned_search::search_arguments;
use arglearn::{learn_pruned, Argument, CaseModel, LiteralSet, SearchConfig, Status, TieRule};
use common::*;
use proptest::prelude::*;

fn unrestricted(model: &CaseModel, ties: TieRule) -> SearchConfig {
    SearchConfig {
        max_premise_size: model.attributes().len().max(1),
        exception_depth: model.attributes().len(),
        target_attributes: None,
        tie_rule: ties,
    }
}

fn searched(
    model: &CaseModel,
    config: &SearchConfig,
) -> BTreeSet<(LiteralSet, LiteralSet, Status)> {
    search_arguments(model, config)
        .unwrap()
        .into_iter()
        .map(|a| (a.premise, a.conclusion, a.status))
        .collect()
}

fn walk<'a>(args: &'a [Argument], depth: usize, out: &mut Vec<(&'a Argument, usize)>) {
    for a in args {
        out.push((a, depth));
        walk(&a.exceptions, depth + 1, out);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn search_matches_brute_force(model in arb_case_model(4, 3, 8)) {
        for ties in [TieRule::Existential, TieRule::Universal] {
            let config = unrestricted(&model, ties);
            let expected = brute_force(&model, config.max_premise_size, ties);
            prop_assert_eq!(searched(&model, &config), expected);
        }
    }

    #[test]
    fn premise_cap_is_a_prefix_of_the_full_search(model in arb_case_model(4, 3, 8), cap in 1usize..=3) {
        let config = SearchConfig::new(cap, 1);
        let expected: BTreeSet<_> = brute_force(&model, cap, TieRule::Existential);
        prop_assert_eq!(searched(&model, &config), expected);
    }

    #[test]
    fn validity_chain(model in arb_case_model(4, 3, 6)) {
        let cases = model.cases();
        for (attr, values) in model.attributes() {
            for p in premises(&model, attr, 4) {
                for v in values {
                    let c = lits_of(attr, v);
                    let arg = Argument::new(p.clone(), c.clone());
                    if model.is_conclusive(&arg) {
                        prop_assert!(model.is_presumptively_valid(&arg));
                    }
                    if model.is_presumptively_valid(&arg) {
                        prop_assert!(model.is_coherent(&arg));
                    }
                    prop_assert_eq!(model.is_coherent(&arg), coherent(cases, &p, &c));
                    prop_assert_eq!(model.is_conclusive(&arg), conclusive(cases, &p, &c));
                    prop_assert_eq!(
                        model.is_presumptively_valid(&arg),
                        presumptively_valid(cases, &p, &c, TieRule::Existential)
                    );
                }
            }
        }
    }

    #[test]
    fn pruning_criteria_hold(model in arb_case_model(4, 3, 6)) {
        let cases = model.cases();
        for (attr, values) in model.attributes() {
            let ps = premises(&model, attr, 4);
            for v in values {
                let c = lits_of(attr, v);
                for p in &ps {
                    for q in &ps {
                        if !p.is_subset_of(q) {
                            continue;
                        }
                        // Conclusive stays conclusive under coherent strengthening.
                        if conclusive(cases, p, &c) && coherent(cases, q, &c) {
                            prop_assert!(conclusive(cases, q, &c), "{p} → {c} but not {q} → {c}");
                        }
                        // Coherence is inherited by weaker premises.
                        if coherent(cases, q, &c) {
                            prop_assert!(coherent(cases, p, &c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn theory_is_sound_and_well_formed(model in arb_case_model(4, 3, 8), cap in 1usize..=4, depth in 0usize..=3) {
        let config = SearchConfig::new(cap, depth);
        let theory = learn_pruned(&model, &config).unwrap();
        let cases = model.cases();
        let mut all = Vec::new();
        walk(&theory.arguments, 0, &mut all);
        for (arg, level) in &all {
            arg.validate().unwrap();
            prop_assert!(*level <= depth);
            prop_assert!(presumptively_valid(cases, &arg.premise, &arg.conclusion, TieRule::Existential), "{arg}");
            if arg.status == Status::Conclusive {
                prop_assert!(conclusive(cases, &arg.premise, &arg.conclusion), "{arg}");
            }
            prop_assert!(arg.premise.len() <= cap);
        }
        let premises: BTreeSet<&LiteralSet> = theory.arguments.iter().map(|a| &a.premise).collect();
        prop_assert_eq!(premises.len(), theory.arguments.len());
    }

    #[test]
    fn theory_is_deterministic(model in arb_case_model(4, 3, 8)) {
        let config = SearchConfig::new(3, 2);
        let a = serde_json::to_string(&learn_pruned(&model, &config).unwrap()).unwrap();
        let b = serde_json::to_string(&learn_pruned(&model, &config).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn prediction_follows_the_most_preferred_case(model in arb_case_model(4, 3, 8)) {
        let theory = learn_pruned(&model, &unrestricted(&model, TieRule::Existential)).unwrap();
        let cases = model.cases();
        for target in model.attributes().keys() {
            for case in cases {
                if case.literals.get(target).is_none() {
                    continue;
                }
                let instance = case.literals.without(target);
                let matching: Vec<_> = cases
                    .iter()
                    .filter(|c| instance.is_subset_of(&c.literals))
                    .collect();
                let top = matching.iter().map(|c| c.weight).max().unwrap();
                let best: Vec<_> = matching.iter().filter(|c| c.weight == top).collect();
                let values: BTreeSet<_> = best.iter().map(|c| c.literals.get(target)).collect();
                // Only unambiguous situations have a defined answer.
                if values.len() != 1 {
                    continue;
                }
                let Some(expected) = values.into_iter().next().unwrap() else {
                    continue;
                };
                let predicted = predict_theory(&theory, &instance, target);
                prop_assert_eq!(
                    predicted.as_ref(),
                    Some(expected),
                    "target {} on {}", target, instance
                );
            }
        }
    }
}

#[test]
fn presumptive_validity_is_not_monotone() {
    // {} ⇝ d=1 holds through the heavy case, but adding a=0 reaches only the light one.
    let model = CaseModel::from_cases(vec![
        arglearn::Case {
            literals: lits(&[("a", 1), ("d", 1)]),
            weight: 3,
        },
        arglearn::Case {
            literals: lits(&[("a", 0), ("d", 0)]),
            weight: 1,
        },
    ])
    .unwrap();
    let weak = Argument::new(LiteralSet::new(), lits(&[("d", 1)]));
    let strong = Argument::new(lits(&[("a", 0)]), lits(&[("d", 1)]));
    assert!(model.is_presumptively_valid(&weak));
    assert!(!model.is_presumptively_valid(&strong));
}
