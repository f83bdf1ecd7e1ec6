use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSilhouette {
    /// Mean distance to the other members of the own cluster.
    pub a: f64,
    /// Mean distance to the members of the nearest other cluster.
    pub b: f64,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilhouetteReport {
    pub score: f64,
    pub per_sample: Vec<SampleSilhouette>,
}

/// Per-cluster sorted values with prefix sums, for O(log n) distance sums.
struct ClusterSums {
    sorted: Vec<f64>,
    prefix: Vec<f64>,
}

impl ClusterSums {
    fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let mut prefix = Vec::with_capacity(values.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for v in &values {
            acc += v;
            prefix.push(acc);
        }
        ClusterSums {
            sorted: values,
            prefix,
        }
    }

    fn len(&self) -> usize {
        self.sorted.len()
    }

    /// Σ |x - y| over the cluster members y.
    fn distance_sum(&self, x: f64) -> f64 {
        let n = self.sorted.len();
        let below = self.sorted.partition_point(|&y| y < x);
        let sum_below = self.prefix[below];
        let sum_above = self.prefix[n] - sum_below;
        (x * below as f64 - sum_below) + (sum_above - x * (n - below) as f64)
    }
}

/// Silhouette coefficients of a 1-D clustering (absolute-difference distance).
///
/// Samples in singleton clusters get coefficient 0.
pub fn silhouette(values: &[f64], labels: &[usize]) -> Result<SilhouetteReport> {
    if values.len() != labels.len() {
        return Err(Error::input(format!(
            "silhouette: {} values but {} labels",
            values.len(),
            labels.len()
        )));
    }
    let mut by_label: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (&v, &l) in values.iter().zip(labels) {
        by_label.entry(l).or_default().push(v);
    }
    if by_label.len() < 2 {
        return Err(Error::UndefinedScore(format!(
            "need at least 2 clusters, got {}",
            by_label.len()
        )));
    }
    let clusters: BTreeMap<usize, ClusterSums> = by_label
        .into_iter()
        .map(|(l, vs)| (l, ClusterSums::new(vs)))
        .collect();

    let per_sample: Vec<SampleSilhouette> = values
        .iter()
        .zip(labels)
        .map(|(&x, l)| {
            let own = &clusters[l];
            if own.len() == 1 {
                let b = nearest_other(&clusters, *l, x);
                return SampleSilhouette {
                    a: 0.0,
                    b,
                    coefficient: 0.0,
                };
            }
            let a = own.distance_sum(x) / (own.len() - 1) as f64;
            let b = nearest_other(&clusters, *l, x);
            let m = a.max(b);
            let coefficient = if m > 0.0 { (b - a) / m } else { 0.0 };
            SampleSilhouette { a, b, coefficient }
        })
        .collect();

    let score = per_sample.iter().map(|s| s.coefficient).sum::<f64>() / per_sample.len() as f64;
    Ok(SilhouetteReport { score, per_sample })
}

fn nearest_other(clusters: &BTreeMap<usize, ClusterSums>, own: usize, x: f64) -> f64 {
    clusters
        .iter()
        .filter(|(&l, _)| l != own)
        .map(|(_, c)| c.distance_sum(x) / c.len() as f64)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct O(n²) evaluation of the textbook definition.
    fn naive(values: &[f64], labels: &[usize]) -> f64 {
        let n = values.len();
        let mut ids: Vec<usize> = labels.to_vec();
        ids.sort();
        ids.dedup();
        let mut total = 0.0;
        for i in 0..n {
            let own: Vec<usize> = (0..n)
                .filter(|&j| j != i && labels[j] == labels[i])
                .collect();
            if own.is_empty() {
                continue;
            }
            let a = own
                .iter()
                .map(|&j| (values[i] - values[j]).abs())
                .sum::<f64>()
                / own.len() as f64;
            let b = ids
                .iter()
                .filter(|&&l| l != labels[i])
                .map(|&l| {
                    let m: Vec<usize> = (0..n).filter(|&j| labels[j] == l).collect();
                    m.iter()
                        .map(|&j| (values[i] - values[j]).abs())
                        .sum::<f64>()
                        / m.len() as f64
                })
                .fold(f64::INFINITY, f64::min);
            let m = a.max(b);
            if m > 0.0 {
                total += (b - a) / m;
            }
        }
        total / n as f64
    }

    #[test]
    fn separated_duplicates_score_one() {
        let r = silhouette(&[0.0, 0.0, 10.0, 10.0], &[0, 0, 1, 1]).unwrap();
        assert!((r.score - 1.0).abs() < 1e-9);
        for s in &r.per_sample {
            assert_eq!(s.a, 0.0);
            assert_eq!(s.b, 10.0);
        }
    }

    #[test]
    fn misassigned_clusters_score_negative() {
        let values = [0.0, 10.0, 0.0, 10.0];
        let labels = [0, 0, 1, 1];
        let r = silhouette(&values, &labels).unwrap();
        // Hand computation: a = 10, b = mean(|0-0|, |0-10|) = 5 for every sample.
        for s in &r.per_sample {
            assert!((s.a - 10.0).abs() < 1e-9);
            assert!((s.b - 5.0).abs() < 1e-9);
        }
        assert!((r.score - -0.5).abs() < 1e-9);
        assert!((r.score - naive(&values, &labels)).abs() < 1e-9);
    }

    #[test]
    fn singletons_score_zero() {
        let r = silhouette(&[0.0, 1.0], &[0, 1]).unwrap();
        assert_eq!(r.score, 0.0);
    }

    #[test]
    fn one_cluster_is_undefined() {
        assert!(matches!(
            silhouette(&[1.0, 2.0], &[3, 3]),
            Err(Error::UndefinedScore(_))
        ));
    }

    #[test]
    fn matches_naive_on_mixed_data() {
        let values = [0.1, 0.5, 0.2, 3.0, 3.5, 9.0, 8.0, 0.3, 3.2];
        let labels = [0, 0, 0, 1, 1, 2, 2, 1, 2];
        let r = silhouette(&values, &labels).unwrap();
        assert!((r.score - naive(&values, &labels)).abs() < 1e-12);
    }
}
