//! Attribute/value propositions and consistent conjunctions of them.
//!
//! Negation is encoded by value: `guilty = false` is the literal ¬guilty, and
//! two literals conflict exactly when they name the same attribute with
//! different values. A [`LiteralSet`] therefore holds at most one value per
//! attribute and is internally consistent by construction.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The value side of a literal: a boolean, a bin label or another integer
/// code, or a categorical string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Str(String),
}

impl Value {
    /// Numeric view used when categorical columns feed the decision tree.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Bool(b) => Some(if *b { 1.0 } else { 0.0 }),
            Value::Int(i) => Some(*i as f64),
            Value::Str(s) => s.parse().ok(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Str(s) => f.write_str(s),
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

/// A single attribute/value proposition. Ordered by attribute name, then value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub attribute: String,
    pub value: Value,
}

impl Literal {
    pub fn new(attribute: impl Into<String>, value: impl Into<Value>) -> Self {
        Literal {
            attribute: attribute.into(),
            value: value.into(),
        }
    }

    pub fn conflicts_with(&self, other: &Literal) -> bool {
        self.attribute == other.attribute && self.value != other.value
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Value::Bool(true) => f.write_str(&self.attribute),
            Value::Bool(false) => write!(f, "¬{}", self.attribute),
            _ => write!(f, "{}={}", self.attribute, self.value),
        }
    }
}

/// A consistent conjunction of literals, stored as an attribute → value map.
///
/// Ordering is lexicographic over the sorted literal sequence, which is the
/// canonical premise order used throughout the crate. Serializes as a JSON
/// object `{attribute: value}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LiteralSet(BTreeMap<String, Value>);

impl LiteralSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from literals, failing if two of them conflict.
    pub fn try_from_literals<I>(literals: I) -> Result<Self>
    where
        I: IntoIterator<Item = Literal>,
    {
        let mut set = LiteralSet::new();
        for lit in literals {
            set.insert(lit)?;
        }
        Ok(set)
    }

    /// Inserts a literal. Re-inserting an identical literal is a no-op;
    /// inserting a conflicting one is an error.
    pub fn insert(&mut self, lit: Literal) -> Result<()> {
        match self.0.entry(lit.attribute) {
            btree_map::Entry::Vacant(e) => {
                e.insert(lit.value);
                Ok(())
            }
            btree_map::Entry::Occupied(e) if *e.get() == lit.value => Ok(()),
            btree_map::Entry::Occupied(e) => Err(Error::input(format!(
                "conflicting literals on attribute {}: {} vs {}",
                e.key(),
                e.get(),
                lit.value
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, attribute: &str) -> Option<&Value> {
        self.0.get(attribute)
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.0.get(&lit.attribute) == Some(&lit.value)
    }

    pub fn has_attribute(&self, attribute: &str) -> bool {
        self.0.contains_key(attribute)
    }

    pub fn attributes(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    /// Literals in canonical (attribute, value) order.
    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.0.iter().map(|(a, v)| Literal {
            attribute: a.clone(),
            value: v.clone(),
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.0.iter().map(|(a, v)| (a.as_str(), v))
    }

    pub fn is_subset_of(&self, other: &LiteralSet) -> bool {
        self.len() <= other.len() && self.0.iter().all(|(a, v)| other.0.get(a) == Some(v))
    }

    pub fn is_proper_subset_of(&self, other: &LiteralSet) -> bool {
        self.len() < other.len() && self.is_subset_of(other)
    }

    /// True if some attribute carries different values in the two sets.
    pub fn conflicts_with(&self, other: &LiteralSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .0
            .iter()
            .any(|(a, v)| large.0.get(a).is_some_and(|w| w != v))
    }

    pub fn is_disjoint(&self, other: &LiteralSet) -> bool {
        self.0.iter().all(|(a, v)| other.0.get(a) != Some(v))
    }

    /// Union of two consistent sets; `None` if they conflict.
    pub fn union(&self, other: &LiteralSet) -> Option<LiteralSet> {
        if self.conflicts_with(other) {
            return None;
        }
        let mut out = self.clone();
        for (a, v) in &other.0 {
            out.0.insert(a.clone(), v.clone());
        }
        Some(out)
    }

    /// The set without the given attribute.
    pub fn without(&self, attribute: &str) -> LiteralSet {
        let mut out = self.clone();
        out.0.remove(attribute);
        out
    }
}

impl FromIterator<(String, Value)> for LiteralSet {
    /// Later pairs overwrite earlier ones on the same attribute.
    fn from_iter<T: IntoIterator<Item = (String, Value)>>(iter: T) -> Self {
        LiteralSet(iter.into_iter().collect())
    }
}

impl fmt::Display for LiteralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let mut first = true;
        for lit in self.iter() {
            if !first {
                f.write_str(" ∧ ")?;
            }
            first = false;
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

/// Shorthand for building literal sets in tests and fixtures.
///
/// ```
/// use arglearn::lits;
/// let p = lits! { "evidence" => true, "bin" => 3i64 };
/// assert_eq!(p.len(), 2);
/// ```
#[macro_export]
macro_rules! lits {
    () => { $crate::LiteralSet::new() };
    ($($attr:expr => $val:expr),+ $(,)?) => {{
        let mut set = $crate::LiteralSet::new();
        $( set.insert($crate::Literal::new($attr, $val)).expect("consistent literals"); )+
        set
    }};
}
