use super::{apply_scheme, discretize, silhouette, BinningScheme, DiscretizationParams, Method};
use crate::error::{Error, Result};

/// Bin counts tried for the k-parameterised methods.
const K_GRID: [usize; 7] = [2, 3, 4, 5, 6, 7, 8];
const EPSILON_FACTORS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
const MIN_PTS_GRID: [usize; 3] = [3, 5, 10];

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredScheme {
    pub scheme: BinningScheme,
    /// Silhouette of the induced labelling; `None` when it has a single bin.
    pub score: Option<f64>,
}

/// The parameter grid searched when a bin count is not given.
///
/// k ∈ {2..=8} for the k-parameterised methods. For DBSCAN, epsilon is a
/// multiple {1/4, 1/2, 1, 2} of the column's standard deviation and
/// min_pts ∈ {3, 5, 10}.
pub fn default_search_space(method: Method, values: &[f64]) -> Vec<DiscretizationParams> {
    match method {
        Method::EqualWidth | Method::EqualDepth | Method::Kmeans => K_GRID
            .iter()
            .map(|&k| DiscretizationParams::bins(k))
            .collect(),
        Method::Dbscan => {
            let q = std_dev(values);
            let mut grid = Vec::new();
            for f in EPSILON_FACTORS {
                for m in MIN_PTS_GRID {
                    grid.push(DiscretizationParams::density(q * f, m));
                }
            }
            grid
        }
    }
}

fn std_dev(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Tries every parameter combination and keeps the scheme whose labelling
/// has the highest silhouette score.
///
/// Ties go to fewer bins, then to the earlier grid entry. Combinations that
/// fail are skipped. A labelling with a single bin has no silhouette and
/// ranks below every scored one, so it is only returned when no combination
/// separates the values.
pub fn optimize_scheme(
    values: &[f64],
    method: Method,
    search_space: &[DiscretizationParams],
) -> Result<BinningScheme> {
    optimize_scheme_scored(values, method, search_space).map(|s| s.scheme)
}

pub fn optimize_scheme_scored(
    values: &[f64],
    method: Method,
    search_space: &[DiscretizationParams],
) -> Result<ScoredScheme> {
    if search_space.is_empty() {
        return Err(Error::input("empty search space"));
    }
    let mut best: Option<ScoredScheme> = None;
    for params in search_space {
        let Ok(scheme) = discretize(values, method, params) else {
            continue;
        };
        let labels: Vec<usize> = values.iter().map(|&v| apply_scheme(v, &scheme)).collect();
        let score = silhouette(values, &labels).ok().map(|r| r.score);
        let better = match &best {
            None => true,
            Some(b) => match (score, b.score) {
                (Some(s), Some(t)) => {
                    s > t || (s == t && scheme.bin_count() < b.scheme.bin_count())
                }
                (Some(_), None) => true,
                (None, _) => false,
            },
        };
        if better {
            best = Some(ScoredScheme { scheme, score });
        }
    }
    best.ok_or_else(|| Error::OptimizationFailed {
        method: method.name().to_string(),
    })
}
