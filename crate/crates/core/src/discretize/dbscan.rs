//! Density-based clustering of a single column.
//!
//! On sorted 1-D data every DBSCAN cluster is a contiguous run, so the
//! epsilon-neighbourhood graph is walked with two pointers instead of a
//! spatial index.

use super::{
    check_values, midpoint_boundaries, sorted, BinningScheme, DiscretizationParams, Method,
};
use crate::error::{Error, Result};

/// DBSCAN with absolute-difference distance.
///
/// A point is a core point when at least `min_pts` points (itself included)
/// lie within `epsilon`. Cores closer than `epsilon` share a cluster; border
/// points join the cluster of their nearest core. Noise is absorbed by the
/// nearest cluster through midpoint boundaries between cluster ranges.
pub fn dbscan_1d(values: &[f64], epsilon: f64, min_pts: usize) -> Result<BinningScheme> {
    check_values(values)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::input(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if min_pts == 0 {
        return Err(Error::input("min_pts must be at least 1"));
    }
    let s = sorted(values);
    let n = s.len();

    let mut is_core = vec![false; n];
    let (mut lo, mut hi) = (0usize, 0usize);
    for i in 0..n {
        while s[i] - s[lo] > epsilon {
            lo += 1;
        }
        while hi + 1 < n && s[hi + 1] - s[i] <= epsilon {
            hi += 1;
        }
        is_core[i] = hi + 1 - lo >= min_pts;
    }

    let cores: Vec<usize> = (0..n).filter(|&i| is_core[i]).collect();
    if cores.is_empty() {
        return Err(Error::NoDenseRegion { epsilon, min_pts });
    }

    // Connected components of core points.
    let mut components: Vec<(usize, usize)> = Vec::new();
    for &c in &cores {
        match components.last_mut() {
            Some(last) if s[c] - s[last.1] <= epsilon => last.1 = c,
            _ => components.push((c, c)),
        }
    }

    let mut ranges: Vec<(f64, f64)> = components.iter().map(|&(a, b)| (s[a], s[b])).collect();
    let mut c = 0;
    for i in 0..n {
        if is_core[i] {
            continue;
        }
        while c + 1 < components.len() && s[components[c].1] < s[i] {
            c += 1;
        }
        // Candidate owners: the component at or after i and the one before it.
        let mut best: Option<(f64, usize)> = None;
        for idx in [c.checked_sub(1), Some(c)].into_iter().flatten() {
            let (a, b) = components[idx];
            let d = if s[i] < s[a] {
                s[a] - s[i]
            } else if s[i] > s[b] {
                s[i] - s[b]
            } else {
                0.0
            };
            if d <= epsilon && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, idx));
            }
        }
        if let Some((_, idx)) = best {
            let r = &mut ranges[idx];
            r.0 = r.0.min(s[i]);
            r.1 = r.1.max(s[i]);
        }
    }

    Ok(BinningScheme::new(
        Method::Dbscan,
        midpoint_boundaries(&ranges),
        DiscretizationParams::density(epsilon, min_pts),
    ))
}
