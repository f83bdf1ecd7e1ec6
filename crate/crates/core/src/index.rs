//! Dense integer encoding of a case model for the search-heavy learners.

use crate::case_model::CaseModel;
use crate::literal::{Literal, LiteralSet};

pub(crate) type LitId = u32;

pub(crate) struct IndexedModel {
    /// All literals in canonical order; a literal's id is its position.
    pub literals: Vec<Literal>,
    pub lit_attr: Vec<usize>,
    pub attr_names: Vec<String>,
    /// Per case, per attribute: the literal the case makes true, if any.
    pub case_lits: Vec<Vec<Option<LitId>>>,
    pub weights: Vec<u64>,
}

impl IndexedModel {
    pub fn new(model: &CaseModel) -> Self {
        let literals = model.literals();
        let attr_names: Vec<String> = model.attributes().keys().cloned().collect();
        let lit_attr: Vec<usize> = literals
            .iter()
            .map(|l| {
                attr_names
                    .binary_search(&l.attribute)
                    .expect("known attribute")
            })
            .collect();
        let case_lits = model
            .cases()
            .iter()
            .map(|c| {
                let mut row = vec![None; attr_names.len()];
                for lit in c.literals.iter() {
                    let id = literals.binary_search(&lit).expect("known literal");
                    row[lit_attr[id]] = Some(id as LitId);
                }
                row
            })
            .collect();
        let weights = model.cases().iter().map(|c| c.weight).collect();
        IndexedModel {
            literals,
            lit_attr,
            attr_names,
            case_lits,
            weights,
        }
    }

    pub fn n_cases(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn case_has(&self, case: usize, lit: LitId) -> bool {
        self.case_lits[case][self.lit_attr[lit as usize]] == Some(lit)
    }

    pub fn attr_index(&self, name: &str) -> Option<usize> {
        self.attr_names.iter().position(|a| a == name)
    }

    pub fn to_set(&self, ids: &[LitId]) -> LiteralSet {
        ids.iter()
            .map(|&i| {
                let l = &self.literals[i as usize];
                (l.attribute.clone(), l.value.clone())
            })
            .collect()
    }
}
