//! CART classification trees with Gini impurity, rule extraction and grid
//! search over stopping parameters.
//!
//! Split quality is compared exactly: the size-weighted child Gini equals
//! `1 - S/n` with `S = Σ_child Σ_class c² / n_child`, so the best split is the
//! one with the largest `S`, compared as a rational number.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::literal::Value;

pub const MAX_DEPTH_CAP: usize = 50;

/// Continuous features with a discrete label per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeData {
    pub feature_names: Vec<String>,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Value>,
}

impl TreeData {
    pub fn new(feature_names: Vec<String>, x: Vec<Vec<f64>>, y: Vec<Value>) -> Result<Self> {
        let data = TreeData {
            feature_names,
            x,
            y,
        };
        data.validate()?;
        Ok(data)
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    fn validate(&self) -> Result<()> {
        if self.x.len() != self.y.len() {
            return Err(Error::input(format!(
                "{} feature rows but {} labels",
                self.x.len(),
                self.y.len()
            )));
        }
        for (i, row) in self.x.iter().enumerate() {
            if row.len() != self.feature_names.len() {
                return Err(Error::input(format!(
                    "row {i} has {} features, expected {}",
                    row.len(),
                    self.feature_names.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::input(format!("row {i} has a non-finite feature")));
            }
        }
        Ok(())
    }

    fn subset(&self, idx: &[usize]) -> TreeData {
        TreeData {
            feature_names: self.feature_names.clone(),
            x: idx.iter().map(|&i| self.x[i].clone()).collect(),
            y: idx.iter().map(|&i| self.y[i].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub min_samples_split: usize,
    /// Features considered per split; all when `None`.
    #[serde(default)]
    pub max_features: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: 10,
            min_samples_leaf: 1,
            min_samples_split: 2,
            max_features: None,
            seed: 0,
        }
    }
}

impl TreeParams {
    pub fn validate(&self, n_features: usize) -> Result<()> {
        if self.max_depth > MAX_DEPTH_CAP {
            return Err(Error::input(format!(
                "max_depth {} exceeds {MAX_DEPTH_CAP}",
                self.max_depth
            )));
        }
        if self.min_samples_leaf == 0 {
            return Err(Error::input("min_samples_leaf must be at least 1"));
        }
        if self.min_samples_split < 2 {
            return Err(Error::input("min_samples_split must be at least 2"));
        }
        if let Some(m) = self.max_features {
            if m == 0 || m > n_features {
                return Err(Error::input(format!(
                    "max_features {m} not in 1..={n_features}"
                )));
            }
        }
        Ok(())
    }
}

/// max_depth {2,5,10,50} × min_samples_leaf {1,5,20} × min_samples_split {2,10},
/// all features at every split.
pub fn default_grid(seed: u64) -> Vec<TreeParams> {
    let mut grid = Vec::new();
    for max_depth in [2, 5, 10, 50] {
        for min_samples_leaf in [1, 5, 20] {
            for min_samples_split in [2, 10] {
                grid.push(TreeParams {
                    max_depth,
                    min_samples_leaf,
                    min_samples_split,
                    max_features: None,
                    seed,
                });
            }
        }
    }
    grid
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        class_counts: Vec<(Value, u64)>,
        prediction: Value,
    },
}

impl TreeNode {
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub feature_names: Vec<String>,
    pub params: TreeParams,
    pub root: TreeNode,
}

impl Tree {
    pub fn predict(&self, features: &[f64]) -> &Value {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { prediction, .. } => return prediction,
                TreeNode::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if features[*feature] < *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn accuracy(&self, data: &TreeData) -> f64 {
        if data.is_empty() {
            return 0.0;
        }
        let correct = data
            .x
            .iter()
            .zip(&data.y)
            .filter(|(x, y)| self.predict(x) == *y)
            .count();
        correct as f64 / data.len() as f64
    }
}

/// `1 - Σ p²`. Errors on an empty histogram.
pub fn gini(class_counts: &[u64]) -> Result<f64> {
    let total: u64 = class_counts.iter().sum();
    if total == 0 {
        return Err(Error::UndefinedScore(
            "Gini impurity of an empty node".into(),
        ));
    }
    let t = total as f64;
    Ok(1.0
        - class_counts
            .iter()
            .map(|&c| (c as f64 / t).powi(2))
            .sum::<f64>())
}

/// `Σ c²` over a histogram and the node size, i.e. the fraction `S` of one child.
#[derive(Clone, Copy)]
struct Purity {
    num: u128,
    den: u128,
}

impl Purity {
    fn of(counts: &[u64]) -> Purity {
        Purity {
            num: counts.iter().map(|&c| (c as u128) * (c as u128)).sum(),
            den: counts.iter().map(|&c| c as u128).sum(),
        }
    }

    fn plus(self, o: Purity) -> Purity {
        Purity {
            num: self.num * o.den + o.num * self.den,
            den: self.den * o.den,
        }
    }

    fn cmp(&self, o: &Purity) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }
}

/// Class ids into `classes`, in canonical value order.
fn encode_labels(y: &[Value]) -> (Vec<Value>, Vec<usize>) {
    let mut classes: Vec<Value> = y.to_vec();
    classes.sort();
    classes.dedup();
    let ids = y
        .iter()
        .map(|v| classes.binary_search(v).expect("known class"))
        .collect();
    (classes, ids)
}

struct SplitSearch<'a> {
    x: &'a [Vec<f64>],
    y: &'a [usize],
    n_classes: usize,
    min_samples_leaf: usize,
}

impl SplitSearch<'_> {
    fn histogram(&self, rows: &[usize]) -> Vec<u64> {
        let mut h = vec![0u64; self.n_classes];
        for &r in rows {
            h[self.y[r]] += 1;
        }
        h
    }

    /// Best strictly impurity-reducing split over `features` (ascending), or None.
    fn best(&self, rows: &[usize], features: &[usize]) -> Option<(usize, f64)> {
        let parent_counts = self.histogram(rows);
        let parent = Purity::of(&parent_counts);
        let n = rows.len();
        let mut best: Option<(Purity, usize, f64)> = None;
        let mut order: Vec<usize> = rows.to_vec();
        for &f in features {
            order.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]));
            let mut left = vec![0u64; self.n_classes];
            let mut right = parent_counts.clone();
            for i in 0..n - 1 {
                let r = order[i];
                left[self.y[r]] += 1;
                right[self.y[r]] -= 1;
                let (lo, hi) = (self.x[r][f], self.x[order[i + 1]][f]);
                if lo == hi {
                    continue;
                }
                let n_left = i + 1;
                if n_left < self.min_samples_leaf || n - n_left < self.min_samples_leaf {
                    continue;
                }
                let score = Purity::of(&left).plus(Purity::of(&right));
                if score.cmp(&parent) != Ordering::Greater {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((b, _, _)) => score.cmp(b) == Ordering::Greater,
                };
                if better {
                    let mut t = lo + (hi - lo) / 2.0;
                    if t <= lo {
                        t = hi;
                    }
                    best = Some((score, f, t));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }
}

/// The Gini-optimal split of `data` over the given feature indices.
/// Ties go to the lowest feature index, then the smallest threshold.
pub fn best_split(data: &TreeData, features: &[usize]) -> Result<Option<(usize, f64)>> {
    if data.is_empty() {
        return Err(Error::input("cannot split an empty node"));
    }
    data.validate()?;
    let (classes, y) = encode_labels(&data.y);
    let mut features = features.to_vec();
    features.sort_unstable();
    features.dedup();
    if let Some(&f) = features.iter().find(|&&f| f >= data.feature_names.len()) {
        return Err(Error::input(format!("feature index {f} out of range")));
    }
    let search = SplitSearch {
        x: &data.x,
        y: &y,
        n_classes: classes.len(),
        min_samples_leaf: 1,
    };
    let rows: Vec<usize> = (0..data.len()).collect();
    Ok(search.best(&rows, &features))
}

pub fn learn_tree(data: &TreeData, params: &TreeParams) -> Result<Tree> {
    if data.is_empty() {
        return Err(Error::input("no training rows"));
    }
    data.validate()?;
    let n_features = data.feature_names.len();
    params.validate(n_features.max(1))?;
    let (classes, y) = encode_labels(&data.y);
    let search = SplitSearch {
        x: &data.x,
        y: &y,
        n_classes: classes.len(),
        min_samples_leaf: params.min_samples_leaf,
    };
    let mut builder = Builder {
        search,
        classes: &classes,
        params,
        n_features,
        rng: ChaCha8Rng::seed_from_u64(params.seed),
    };
    let rows: Vec<usize> = (0..data.len()).collect();
    let root = builder.grow(&rows, 0);
    Ok(Tree {
        feature_names: data.feature_names.clone(),
        params: *params,
        root,
    })
}

struct Builder<'a> {
    search: SplitSearch<'a>,
    classes: &'a [Value],
    params: &'a TreeParams,
    n_features: usize,
    rng: ChaCha8Rng,
}

impl Builder<'_> {
    fn leaf(&self, rows: &[usize]) -> TreeNode {
        let h = self.search.histogram(rows);
        // First maximum in canonical order breaks ties toward the smallest value.
        let mut arg = 0;
        for (i, &c) in h.iter().enumerate() {
            if c > h[arg] {
                arg = i;
            }
        }
        TreeNode::Leaf {
            class_counts: self
                .classes
                .iter()
                .cloned()
                .zip(h.iter().copied())
                .collect(),
            prediction: self.classes[arg].clone(),
        }
    }

    fn features(&mut self) -> Vec<usize> {
        let mut all: Vec<usize> = (0..self.n_features).collect();
        match self.params.max_features {
            Some(m) if m < self.n_features => {
                all.shuffle(&mut self.rng);
                all.truncate(m);
                all.sort_unstable();
                all
            }
            _ => all,
        }
    }

    fn grow(&mut self, rows: &[usize], depth: usize) -> TreeNode {
        if depth >= self.params.max_depth || rows.len() < self.params.min_samples_split {
            return self.leaf(rows);
        }
        let features = self.features();
        let Some((feature, threshold)) = self.search.best(rows, &features) else {
            return self.leaf(rows);
        };
        let (left, right): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&r| self.search.x[r][feature] < threshold);
        TreeNode::Internal {
            feature,
            threshold,
            left: Box::new(self.grow(&left, depth + 1)),
            right: Box::new(self.grow(&right, depth + 1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub attribute: String,
    pub op: Comparison,
    pub threshold: f64,
}

impl Condition {
    pub fn holds(&self, value: f64) -> bool {
        match self.op {
            Comparison::Lt => value < self.threshold,
            Comparison::Ge => value >= self.threshold,
        }
    }
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let op = match self.op {
            Comparison::Lt => "<",
            Comparison::Ge => "≥",
        };
        write!(f, "{} {op} {}", self.attribute, self.threshold)
    }
}

/// A root-to-leaf path read as a rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeRule {
    pub premise: Vec<Condition>,
    pub conclusion: Value,
}

impl TreeRule {
    pub fn applies(&self, feature_names: &[String], features: &[f64]) -> bool {
        self.premise.iter().all(|c| {
            feature_names
                .iter()
                .position(|n| *n == c.attribute)
                .is_some_and(|i| c.holds(features[i]))
        })
    }
}

/// One rule per leaf, left subtrees first.
pub fn tree_to_rules(tree: &Tree) -> Vec<TreeRule> {
    fn walk(node: &TreeNode, names: &[String], path: &mut Vec<Condition>, out: &mut Vec<TreeRule>) {
        match node {
            TreeNode::Leaf { prediction, .. } => out.push(TreeRule {
                premise: path.clone(),
                conclusion: prediction.clone(),
            }),
            TreeNode::Internal {
                feature,
                threshold,
                left,
                right,
            } => {
                for (op, child) in [(Comparison::Lt, left), (Comparison::Ge, right)] {
                    path.push(Condition {
                        attribute: names[*feature].clone(),
                        op,
                        threshold: *threshold,
                    });
                    walk(child, names, path, out);
                    path.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(&tree.root, &tree.feature_names, &mut Vec::new(), &mut out);
    out
}

/// Grid point with the best mean accuracy over `folds` cross-validation
/// folds; ties go to the earlier grid point. Folds come from a seeded shuffle.
pub fn tune_tree(
    data: &TreeData,
    grid: &[TreeParams],
    folds: usize,
    seed: u64,
) -> Result<TreeParams> {
    if grid.is_empty() {
        return Err(Error::input("empty parameter grid"));
    }
    if folds < 2 {
        return Err(Error::input("at least 2 folds are required"));
    }
    if data.len() < folds {
        return Err(Error::input(format!(
            "{} rows cannot form {folds} folds",
            data.len()
        )));
    }
    data.validate()?;
    if grid.len() == 1 {
        grid[0].validate(data.feature_names.len().max(1))?;
        return Ok(grid[0]);
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let splits: Vec<(TreeData, TreeData)> = (0..folds)
        .map(|k| {
            let (mut train, mut test) = (Vec::new(), Vec::new());
            for (i, &r) in order.iter().enumerate() {
                if i % folds == k {
                    test.push(r)
                } else {
                    train.push(r)
                }
            }
            (data.subset(&train), data.subset(&test))
        })
        .collect();

    let scores: Vec<f64> = grid
        .par_iter()
        .map(|p| -> Result<f64> {
            let mut sum = 0.0;
            for (train, test) in &splits {
                sum += learn_tree(train, p)?.accuracy(test);
            }
            Ok(sum / folds as f64)
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    Ok(grid[best])
}
