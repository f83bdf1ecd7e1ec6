//! Lloyd's k-means on a single column, converted to contiguous ranges.

use super::{
    check_values, midpoint_boundaries, sorted, BinningScheme, DiscretizationParams, Method,
};
use crate::error::{Error, Result};

/// Stop once no centroid moves more than this.
pub const KMEANS_TOLERANCE: f64 = 1e-6;
pub const KMEANS_MAX_ITER: usize = 100;

/// Clusters `values` into `k` groups and turns each cluster into the range
/// between its smallest and largest member.
///
/// The first run starts from the `(i + 0.5) / k` quantiles of the sorted
/// values; coinciding initial centroids (runs of ties) are pushed to the next
/// distinct value. Lloyd can stall in a local optimum from there, so a second
/// run starts from the centroids of the optimal contiguous partition, found by
/// dynamic programming over the distinct values. That partition is already a
/// fixed point, so the second run only confirms it. The run with the smaller
/// within-cluster sum of squares wins (the quantile run on ties).
pub fn kmeans_1d(values: &[f64], k: usize, params: &DiscretizationParams) -> Result<BinningScheme> {
    check_values(values)?;
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    let s = sorted(values);
    let mut distinct = s.clone();
    distinct.dedup();
    if k > distinct.len() {
        return Err(Error::input(format!(
            "k-means needs k <= distinct values ({k} > {})",
            distinct.len()
        )));
    }

    let mut best = lloyd(&s, initial_centroids(&s, &distinct, k));
    let exact = lloyd(&s, optimal_centroids(&s, &distinct, k));
    if exact.1 < best.1 {
        best = exact;
    }
    let assignment = best.0;

    // Sorted values with nearest-centroid assignment give contiguous runs.
    let mut ranges: Vec<(f64, f64)> = Vec::with_capacity(k);
    let mut current = usize::MAX;
    for (&v, &c) in s.iter().zip(&assignment) {
        if c != current {
            ranges.push((v, v));
            current = c;
        } else if let Some(last) = ranges.last_mut() {
            last.1 = v;
        }
    }
    // A tie run split across clusters would produce touching ranges; merge them.
    ranges.dedup_by(|next, prev| {
        if next.0 <= prev.1 {
            prev.1 = prev.1.max(next.1);
            true
        } else {
            false
        }
    });

    let mut p = params.clone();
    p.k = Some(k);
    Ok(BinningScheme::new(
        Method::Kmeans,
        midpoint_boundaries(&ranges),
        p,
    ))
}

/// Lloyd iterations from `centroids`; returns the final assignment of the
/// sorted values and its within-cluster sum of squares.
fn lloyd(s: &[f64], mut centroids: Vec<f64>) -> (Vec<usize>, f64) {
    let k = centroids.len();
    let mut assignment = vec![0usize; s.len()];
    for _ in 0..KMEANS_MAX_ITER {
        assign(s, &centroids, &mut assignment);
        let mut sums = vec![0.0; k];
        let mut counts = vec![0usize; k];
        for (&v, &c) in s.iter().zip(&assignment) {
            sums[c] += v;
            counts[c] += 1;
        }
        let mut movement = 0.0f64;
        for c in 0..k {
            if counts[c] > 0 {
                let next = sums[c] / counts[c] as f64;
                movement = movement.max((next - centroids[c]).abs());
                centroids[c] = next;
            }
        }
        if movement < KMEANS_TOLERANCE {
            break;
        }
    }
    assign(s, &centroids, &mut assignment);
    let mut sums = vec![0.0; k];
    let mut counts = vec![0usize; k];
    for (&v, &c) in s.iter().zip(&assignment) {
        sums[c] += v;
        counts[c] += 1;
    }
    let wcss = s
        .iter()
        .zip(&assignment)
        .map(|(&v, &c)| (v - sums[c] / counts[c] as f64).powi(2))
        .sum();
    (assignment, wcss)
}

/// Means of the `k` groups of the minimum-WCSS split of the sorted values into
/// contiguous runs of distinct values.
fn optimal_centroids(s: &[f64], distinct: &[f64], k: usize) -> Vec<f64> {
    let m = distinct.len();
    // Prefix sums over distinct values weighted by multiplicity.
    let (mut n, mut sum, mut sq) = (vec![0.0; m + 1], vec![0.0; m + 1], vec![0.0; m + 1]);
    let mut i = 0;
    for (j, &d) in distinct.iter().enumerate() {
        let mut c = 0.0;
        while i < s.len() && s[i] == d {
            c += 1.0;
            i += 1;
        }
        n[j + 1] = n[j] + c;
        sum[j + 1] = sum[j] + c * d;
        sq[j + 1] = sq[j] + c * d * d;
    }
    let cost = |a: usize, b: usize| {
        let (cn, cs) = (n[b] - n[a], sum[b] - sum[a]);
        (sq[b] - sq[a] - cs * cs / cn).max(0.0)
    };
    let mean = |a: usize, b: usize| (sum[b] - sum[a]) / (n[b] - n[a]);

    // best[q][j]: cheapest split of the first j distinct values into q + 1 groups.
    let mut best = vec![vec![f64::INFINITY; m + 1]; k];
    let mut cut = vec![vec![0usize; m + 1]; k];
    for (j, slot) in best[0].iter_mut().enumerate().skip(1) {
        *slot = cost(0, j);
    }
    for q in 1..k {
        for j in q + 1..=m {
            for a in q..j {
                let c = best[q - 1][a] + cost(a, j);
                if c < best[q][j] {
                    best[q][j] = c;
                    cut[q][j] = a;
                }
            }
        }
    }
    let mut centroids = vec![0.0; k];
    let mut end = m;
    for q in (0..k).rev() {
        let start = if q == 0 { 0 } else { cut[q][end] };
        centroids[q] = mean(start, end);
        end = start;
    }
    centroids
}

fn initial_centroids(s: &[f64], distinct: &[f64], k: usize) -> Vec<f64> {
    let n = s.len();
    let mut centroids: Vec<f64> = Vec::with_capacity(k);
    for i in 0..k {
        let idx = (((i as f64 + 0.5) / k as f64) * n as f64).floor() as usize;
        let mut c = s[idx.min(n - 1)];
        if let Some(&prev) = centroids.last() {
            if c <= prev {
                let pos = distinct.partition_point(|&d| d <= prev);
                c = distinct[pos.min(distinct.len() - 1)];
            }
        }
        centroids.push(c);
    }
    // Pushing forward can run off the top; pull the tail back onto distinct values.
    for i in (0..k).rev() {
        let limit = distinct[distinct.len() - (k - i)];
        if centroids[i] > limit {
            centroids[i] = limit;
        }
    }
    centroids
}

fn assign(s: &[f64], centroids: &[f64], out: &mut [usize]) {
    for (v, slot) in s.iter().zip(out.iter_mut()) {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (c, &m) in centroids.iter().enumerate() {
            let d = (v - m).abs();
            if d < best_d {
                best = c;
                best_d = d;
            }
        }
        *slot = best;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::apply_scheme;

    /// Minimum within-cluster sum of squares over all contiguous partitions of
    /// the sorted values into exactly `k` non-empty groups that keep ties together.
    pub(crate) fn brute_force_wcss(values: &[f64], k: usize) -> f64 {
        let s = sorted(values);
        let cut_points: Vec<usize> = (1..s.len()).filter(|&i| s[i] != s[i - 1]).collect();
        let mut best = f64::INFINITY;
        let m = cut_points.len();
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != k - 1 {
                continue;
            }
            let mut cuts: Vec<usize> = (0..m)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| cut_points[b])
                .collect();
            cuts.insert(0, 0);
            cuts.push(s.len());
            let total: f64 = cuts.windows(2).map(|w| sse(&s[w[0]..w[1]])).sum();
            best = best.min(total);
        }
        best
    }

    fn sse(group: &[f64]) -> f64 {
        let mean = group.iter().sum::<f64>() / group.len() as f64;
        group.iter().map(|v| (v - mean).powi(2)).sum()
    }

    pub(crate) fn scheme_wcss(values: &[f64], scheme: &BinningScheme) -> f64 {
        let mut groups = vec![Vec::new(); scheme.bin_count()];
        for &v in values {
            groups[apply_scheme(v, scheme)].push(v);
        }
        groups
            .iter()
            .filter(|g| !g.is_empty())
            .map(|g| sse(g))
            .sum()
    }

    #[test]
    fn two_clear_clusters() {
        let values = [0.0, 0.1, 10.0, 10.1];
        let s = kmeans_1d(&values, 2, &DiscretizationParams::bins(2)).unwrap();
        assert_eq!(s.bin_count(), 2);
        assert!((s.boundaries[0] - 5.05).abs() < 1e-9);
        assert!((scheme_wcss(&values, &s) - brute_force_wcss(&values, 2)).abs() < 1e-9);
    }

    #[test]
    fn k_equals_distinct_count_gives_singletons() {
        let values = [1.0, 2.0, 3.0];
        let s = kmeans_1d(&values, 3, &DiscretizationParams::bins(3)).unwrap();
        assert_eq!(s.boundaries, vec![1.5, 2.5]);
    }

    #[test]
    fn heavy_tie_run() {
        let values = [0.0, 0.0, 0.0, 9.0];
        let s = kmeans_1d(&values, 2, &DiscretizationParams::bins(2)).unwrap();
        assert_eq!(s.boundaries, vec![4.5]);
        assert!((scheme_wcss(&values, &s) - brute_force_wcss(&values, 2)).abs() < 1e-9);
    }

    #[test]
    fn duplicated_quantiles_still_give_k_clusters() {
        let values = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 9.0];
        let s = kmeans_1d(&values, 3, &DiscretizationParams::bins(3)).unwrap();
        assert_eq!(s.bin_count(), 3);
    }

    #[test]
    fn escapes_the_quantile_local_optimum() {
        let values = [
            16.0, 0.0, 100.0, 4.0, 16.0, 121.0, 36.0, 81.0, 25.0, 36.0, 16.0, 81.0, 81.0,
        ];
        let s = kmeans_1d(&values, 4, &DiscretizationParams::bins(4)).unwrap();
        assert!((scheme_wcss(&values, &s) - brute_force_wcss(&values, 4)).abs() < 1e-9);
    }

    #[test]
    fn too_many_clusters_is_an_error() {
        assert!(kmeans_1d(&[1.0, 1.0, 2.0], 3, &DiscretizationParams::bins(3)).is_err());
    }
}
