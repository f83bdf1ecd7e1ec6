//! Discretization of continuous columns into ordered, non-overlapping bins.
//!
//! Every method produces a [`BinningScheme`]: an ascending list of cut points
//! defining half-open intervals `[lo, hi)`. Values below the first cut fall in
//! bin 0 and values at or above the last cut fall in the final bin, so
//! [`apply_scheme`] is total and also clamps unseen test values.

mod binning;
mod dbscan;
mod kmeans;
mod optimize;
mod silhouette;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use binning::{equal_depth_bins, equal_width_bins};
pub use dbscan::dbscan_1d;
pub use kmeans::{kmeans_1d, KMEANS_MAX_ITER, KMEANS_TOLERANCE};
pub use optimize::{default_search_space, optimize_scheme, optimize_scheme_scored, ScoredScheme};
pub use silhouette::{silhouette, SampleSilhouette, SilhouetteReport};

/// The four binning algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    EqualWidth,
    EqualDepth,
    Kmeans,
    Dbscan,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::EqualWidth,
        Method::EqualDepth,
        Method::Kmeans,
        Method::Dbscan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::EqualWidth => "equal-width",
            Method::EqualDepth => "equal-depth",
            Method::Kmeans => "kmeans",
            Method::Dbscan => "dbscan",
        }
    }

    /// Short label used in report tables.
    pub fn table_label(self) -> &'static str {
        match self {
            Method::EqualWidth => "EWBinning",
            Method::EqualDepth => "EDBinning",
            Method::Kmeans => "kMeans",
            Method::Dbscan => "DBSCAN",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "equal-width" | "ew" | "ewbinning" => Ok(Method::EqualWidth),
            "equal-depth" | "equal-frequency" | "ed" | "edbinning" => Ok(Method::EqualDepth),
            "kmeans" | "k-means" => Ok(Method::Kmeans),
            "dbscan" => Ok(Method::Dbscan),
            other => Err(Error::input(format!("unknown binning method: {other}"))),
        }
    }
}

/// Parameters a scheme was produced with. Only the fields relevant to the
/// method are set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DiscretizationParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_pts: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl DiscretizationParams {
    pub fn bins(k: usize) -> Self {
        DiscretizationParams {
            k: Some(k),
            ..Default::default()
        }
    }

    pub fn density(epsilon: f64, min_pts: usize) -> Self {
        DiscretizationParams {
            epsilon: Some(epsilon),
            min_pts: Some(min_pts),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == Some(0) {
            return Err(Error::input("k must be at least 1"));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::input(format!("epsilon must be positive, got {eps}")));
            }
        }
        if self.min_pts == Some(0) {
            return Err(Error::input("min_pts must be at least 1"));
        }
        Ok(())
    }

    pub(crate) fn require_k(&self) -> Result<usize> {
        self.validate()?;
        self.k
            .ok_or_else(|| Error::input("parameter k is required"))
    }
}

/// Mapping from a continuous column to ordinal bin labels `0..bin_count()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinningScheme {
    pub attribute: String,
    pub method: Method,
    pub boundaries: Vec<f64>,
    pub params: DiscretizationParams,
}

impl BinningScheme {
    pub(crate) fn new(method: Method, boundaries: Vec<f64>, params: DiscretizationParams) -> Self {
        BinningScheme {
            attribute: String::new(),
            method,
            boundaries,
            params,
        }
    }

    pub fn named(mut self, attribute: impl Into<String>) -> Self {
        self.attribute = attribute.into();
        self
    }

    pub fn bin_count(&self) -> usize {
        self.boundaries.len() + 1
    }

    pub fn bin_labels(&self) -> std::ops::Range<usize> {
        0..self.bin_count()
    }

    pub fn apply(&self, value: f64) -> usize {
        apply_scheme(value, self)
    }

    /// Checks the ascending-boundaries invariant; used on deserialized schemes.
    pub fn validate(&self) -> Result<()> {
        if self.boundaries.iter().any(|b| !b.is_finite()) {
            return Err(Error::input("scheme boundaries must be finite"));
        }
        if self.boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input(format!(
                "scheme boundaries for {} are not strictly ascending",
                self.attribute
            )));
        }
        Ok(())
    }
}

/// Bin label of `value`: the number of cut points at or below it.
pub fn apply_scheme(value: f64, scheme: &BinningScheme) -> usize {
    scheme.boundaries.partition_point(|&b| b <= value)
}

/// Builds a scheme with the requested method and parameters.
pub fn discretize(
    values: &[f64],
    method: Method,
    params: &DiscretizationParams,
) -> Result<BinningScheme> {
    match method {
        Method::EqualWidth => {
            let mut s = equal_width_bins(values, params.require_k()?)?;
            s.params.seed = params.seed;
            Ok(s)
        }
        Method::EqualDepth => {
            let mut s = equal_depth_bins(values, params.require_k()?)?;
            s.params.seed = params.seed;
            Ok(s)
        }
        Method::Kmeans => kmeans_1d(values, params.require_k()?, params),
        Method::Dbscan => {
            params.validate()?;
            let eps = params
                .epsilon
                .ok_or_else(|| Error::input("DBSCAN requires epsilon"))?;
            let min_pts = params
                .min_pts
                .ok_or_else(|| Error::input("DBSCAN requires min_pts"))?;
            let mut s = dbscan_1d(values, eps, min_pts)?;
            s.params.seed = params.seed;
            Ok(s)
        }
    }
}

pub(crate) fn check_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::input("cannot discretize an empty column"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::input(format!("non-finite value in column: {v}")));
    }
    Ok(())
}

pub(crate) fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Cut points at the midpoints between adjacent `[min, max]` ranges.
pub(crate) fn midpoint_boundaries(ranges: &[(f64, f64)]) -> Vec<f64> {
    ranges
        .windows(2)
        .map(|w| w[0].1 + (w[1].0 - w[0].1) / 2.0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scheme(boundaries: Vec<f64>) -> BinningScheme {
        BinningScheme::new(
            Method::EqualWidth,
            boundaries,
            DiscretizationParams::bins(2),
        )
    }

    #[test]
    fn apply_half_open_and_clamped() {
        let s = scheme(vec![5.0]);
        assert_eq!(apply_scheme(3.0, &s), 0);
        assert_eq!(apply_scheme(-100.0, &s), 0);
        assert_eq!(apply_scheme(5.0, &s), 1);
        assert_eq!(apply_scheme(1e12, &s), 1);
    }

    #[test]
    fn single_bin_scheme_maps_everything_to_zero() {
        let s = scheme(vec![]);
        assert_eq!(s.bin_count(), 1);
        assert_eq!(apply_scheme(f64::MIN, &s), 0);
        assert_eq!(apply_scheme(f64::MAX, &s), 0);
    }

    #[test]
    fn json_shape() {
        let s = scheme(vec![5.0]).named("MEDV");
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["attribute"], "MEDV");
        assert_eq!(v["method"], "equal-width");
        assert_eq!(v["boundaries"][0], 5.0);
        assert_eq!(v["params"]["k"], 2);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("entropy".parse::<Method>().is_err());
    }

    #[test]
    fn validate_rejects_unsorted() {
        assert!(scheme(vec![2.0, 1.0]).validate().is_err());
        assert!(scheme(vec![1.0, 1.0]).validate().is_err());
        assert!(scheme(vec![1.0, 2.0]).validate().is_ok());
    }
}
