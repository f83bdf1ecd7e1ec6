//! Accuracy and support-weighted F1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::literal::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: Value,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Number of rows whose actual value is this class.
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub weighted_f1: f64,
    pub per_class: Vec<ClassMetrics>,
    pub n: usize,
    pub abstentions: usize,
    pub abstention_rate: f64,
    /// Wall-clock training time; zero unless set by the caller.
    #[serde(default)]
    pub runtime_ms: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Scores `(predicted, actual)` pairs. An abstention (`None`) counts as wrong
/// and as a missed row for its actual class. Precision or recall with an
/// empty denominator is 0.
pub fn evaluate(predictions: &[(Option<Value>, Value)]) -> Result<EvalReport> {
    if predictions.is_empty() {
        return Err(Error::input("nothing to evaluate"));
    }
    #[derive(Default)]
    struct Tally {
        tp: usize,
        predicted: usize,
        actual: usize,
    }
    let mut tallies: BTreeMap<&Value, Tally> = BTreeMap::new();
    let mut correct = 0;
    let mut abstentions = 0;
    for (pred, actual) in predictions {
        tallies.entry(actual).or_default().actual += 1;
        match pred {
            None => abstentions += 1,
            Some(p) => {
                tallies.entry(p).or_default().predicted += 1;
                if p == actual {
                    correct += 1;
                    tallies.get_mut(actual).expect("inserted").tp += 1;
                }
            }
        }
    }
    let n = predictions.len();
    let per_class: Vec<ClassMetrics> = tallies
        .into_iter()
        .map(|(class, t)| {
            let precision = ratio(t.tp, t.predicted);
            let recall = ratio(t.tp, t.actual);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            ClassMetrics {
                class: class.clone(),
                precision,
                recall,
                f1,
                support: t.actual,
            }
        })
        .collect();
    let weighted_f1 = per_class
        .iter()
        .map(|c| c.support as f64 / n as f64 * c.f1)
        .sum();
    Ok(EvalReport {
        accuracy: ratio(correct, n),
        weighted_f1,
        per_class,
        n,
        abstentions,
        abstention_rate: ratio(abstentions, n),
        runtime_ms: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Value {
        Value::from(s)
    }

    #[test]
    fn all_correct() {
        let r = evaluate(&[(Some(v("A")), v("A")), (Some(v("B")), v("B"))]).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.weighted_f1, 1.0);
    }

    #[test]
    fn mixed_example() {
        let r = evaluate(&[
            (Some(v("A")), v("A")),
            (Some(v("A")), v("B")),
            (Some(v("B")), v("B")),
            (Some(v("B")), v("B")),
        ])
        .unwrap();
        assert!((r.accuracy - 0.75).abs() < 1e-9);
        let expected = 0.25 * (2.0 / 3.0) + 0.75 * (4.0 / 5.0);
        assert!((r.weighted_f1 - expected).abs() < 1e-9);
        assert_eq!(r.per_class[0].precision, 0.5);
        assert_eq!(r.per_class[0].recall, 1.0);
        assert_eq!(r.per_class[1].precision, 1.0);
        assert!((r.per_class[1].recall - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn all_abstain() {
        let r = evaluate(&[(None, v("A")), (None, v("B"))]).unwrap();
        assert_eq!(r.accuracy, 0.0);
        assert_eq!(r.weighted_f1, 0.0);
        assert_eq!(r.abstention_rate, 1.0);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(evaluate(&[]).is_err());
    }
}
