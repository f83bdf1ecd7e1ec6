//! The end-to-end pipeline: load, split, discretize on the training part,
//! learn, predict on both parts, evaluate.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::case_model::{build_case_model, CaseModel};
use crate::data::{load_csv, split_indices, Column, Table};
use crate::dectree::{
    default_grid, learn_tree, tree_to_rules, tune_tree, Tree, TreeData, TreeRule,
};
use crate::discretize::{
    apply_scheme, default_search_space, discretize, optimize_scheme_scored, BinningScheme,
    DiscretizationParams, Method,
};
use crate::error::{Error, Result, StageExt};
use crate::hero::{learn_hero, RuleList};
use crate::inference::{evaluate, predict_rule_list, predict_theory, EvalReport};
use crate::literal::{LiteralSet, Value};
use crate::pruned_search::{learn_pruned, SearchConfig, Theory};

/// Folds used when tuning decision trees.
pub const TREE_CV_FOLDS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Learner {
    PrunedSearch,
    Hero,
    Dectree,
}

impl Learner {
    pub fn name(self) -> &'static str {
        match self {
            Learner::PrunedSearch => "pruned_search",
            Learner::Hero => "hero",
            Learner::Dectree => "dectree",
        }
    }
}

impl fmt::Display for Learner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Learner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "pruned_search" | "pruned" => Ok(Learner::PrunedSearch),
            "hero" => Ok(Learner::Hero),
            "dectree" | "decision_tree" | "tree" => Ok(Learner::Dectree),
            other => Err(Error::input(format!("unknown learner: {other}"))),
        }
    }
}

/// A fixed discretization method, or the best silhouette over all methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Binning {
    Method(Method),
    Opt,
}

impl fmt::Display for Binning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binning::Method(m) => f.write_str(m.name()),
            Binning::Opt => f.write_str("opt"),
        }
    }
}

impl FromStr for Binning {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("opt") {
            Ok(Binning::Opt)
        } else {
            s.parse().map(Binning::Method)
        }
    }
}

impl TryFrom<String> for Binning {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Binning> for String {
    fn from(b: Binning) -> String {
        b.to_string()
    }
}

/// A fixed bin count, or one chosen per column by silhouette.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BinsRepr", into = "BinsRepr")]
pub enum Bins {
    Fixed(usize),
    Opt,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BinsRepr {
    Count(usize),
    Word(String),
}

impl TryFrom<BinsRepr> for Bins {
    type Error = Error;

    fn try_from(r: BinsRepr) -> Result<Self> {
        match r {
            BinsRepr::Count(k) => Ok(Bins::Fixed(k)),
            BinsRepr::Word(s) => s.parse(),
        }
    }
}

impl From<Bins> for BinsRepr {
    fn from(b: Bins) -> BinsRepr {
        match b {
            Bins::Fixed(k) => BinsRepr::Count(k),
            Bins::Opt => BinsRepr::Word("opt".into()),
        }
    }
}

impl fmt::Display for Bins {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bins::Fixed(k) => write!(f, "{k}"),
            Bins::Opt => f.write_str("opt"),
        }
    }
}

impl FromStr for Bins {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("opt") {
            return Ok(Bins::Opt);
        }
        s.parse::<usize>().map(Bins::Fixed).map_err(|_| {
            Error::input(format!(
                "bins must be a positive integer or \"opt\", got {s:?}"
            ))
        })
    }
}

fn default_split_fraction() -> f64 {
    0.8
}

fn default_max_premise_size() -> usize {
    2
}

fn default_exception_depth() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// A CSV table, or a case-model JSON file (`.json`) that skips discretization.
    pub dataset_path: PathBuf,
    pub target: String,
    pub learner: Learner,
    pub binning: Binning,
    pub bins: Bins,
    #[serde(default = "default_max_premise_size")]
    pub max_premise_size: usize,
    #[serde(default = "default_exception_depth")]
    pub exception_depth: usize,
    /// Training share; 1.0 trains and tests on everything.
    #[serde(default = "default_split_fraction")]
    pub split_fraction: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(
        dataset_path: impl Into<PathBuf>,
        target: impl Into<String>,
        learner: Learner,
    ) -> Self {
        ExperimentConfig {
            dataset_path: dataset_path.into(),
            target: target.into(),
            learner,
            binning: Binning::Method(Method::EqualWidth),
            bins: Bins::Fixed(2),
            max_premise_size: default_max_premise_size(),
            exception_depth: default_exception_depth(),
            split_fraction: default_split_fraction(),
            seed: 0,
            output_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.split_fraction > 0.0 && self.split_fraction <= 1.0) {
            return Err(Error::input(format!(
                "split_fraction must be in (0, 1], got {}",
                self.split_fraction
            )));
        }
        if self.bins == Bins::Fixed(0) {
            return Err(Error::input("bins must be at least 1"));
        }
        if self.max_premise_size == 0 {
            return Err(Error::input("max_premise_size must be at least 1"));
        }
        if self.target.is_empty() {
            return Err(Error::input("target must be named"));
        }
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(json)?;
        c.validate()?;
        Ok(c)
    }

    fn is_case_model(&self) -> bool {
        self.dataset_path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    }

    fn search_config(&self) -> SearchConfig {
        SearchConfig::new(self.max_premise_size, self.exception_depth)
            .with_targets([self.target.clone()])
    }
}

/// How one column is turned into literals or tree features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnEncoding {
    /// Ordinal bin label of a numeric value.
    Binned {
        attribute: String,
        scheme: BinningScheme,
    },
    /// Numeric column with at most two distinct values, used as is.
    Exempt { attribute: String },
    /// Text values used as is.
    Categorical { attribute: String },
    /// Numeric tree feature.
    Continuous { attribute: String },
    /// Text tree feature, coded by position in the sorted training values.
    Ordinal {
        attribute: String,
        categories: Vec<String>,
    },
}

impl ColumnEncoding {
    pub fn attribute(&self) -> &str {
        match self {
            ColumnEncoding::Binned { attribute, .. }
            | ColumnEncoding::Exempt { attribute }
            | ColumnEncoding::Categorical { attribute }
            | ColumnEncoding::Continuous { attribute }
            | ColumnEncoding::Ordinal { attribute, .. } => attribute,
        }
    }

    fn literal(&self, column: &Column, row: usize) -> Result<Value> {
        match (self, column) {
            (ColumnEncoding::Binned { scheme, .. }, Column::Numeric(v)) => {
                Ok(Value::Int(apply_scheme(v[row], scheme) as i64))
            }
            (ColumnEncoding::Exempt { .. }, Column::Numeric(v)) => Ok(raw_value(v[row])),
            (ColumnEncoding::Categorical { .. }, Column::Categorical(v)) => {
                Ok(Value::Str(v[row].clone()))
            }
            _ => Err(Error::input(format!(
                "column {} does not have the type it was trained with",
                self.attribute()
            ))),
        }
    }

    fn feature(&self, column: &Column, row: usize) -> Result<f64> {
        match (self, column) {
            (ColumnEncoding::Continuous { .. }, Column::Numeric(v)) => Ok(v[row]),
            (ColumnEncoding::Ordinal { categories, .. }, Column::Categorical(v)) => {
                Ok(categories.partition_point(|c| *c < v[row]) as f64)
            }
            _ => Err(Error::input(format!(
                "column {} does not have the type it was trained with",
                self.attribute()
            ))),
        }
    }
}

fn raw_value(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        Value::Int(x as i64)
    } else {
        Value::Str(x.to_string())
    }
}

/// Column encodings fitted on a training table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preprocessor {
    pub target: ColumnEncoding,
    pub features: Vec<ColumnEncoding>,
}

fn distinct_count(values: &[f64]) -> usize {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

/// Scheme for one numeric column under the configured binning.
pub fn fit_scheme(
    values: &[f64],
    binning: Binning,
    bins: Bins,
    seed: u64,
) -> Result<BinningScheme> {
    let candidates = |m: Method| -> Vec<DiscretizationParams> {
        let mut grid = match (m, bins) {
            (Method::Dbscan, _) | (_, Bins::Opt) => default_search_space(m, values),
            (Method::Kmeans, Bins::Fixed(k)) => {
                vec![DiscretizationParams::bins(k.min(distinct_count(values)))]
            }
            (_, Bins::Fixed(k)) => vec![DiscretizationParams::bins(k)],
        };
        for p in &mut grid {
            p.seed = seed;
        }
        grid
    };
    match binning {
        Binning::Method(m) => {
            let grid = candidates(m);
            if grid.len() == 1 {
                discretize(values, m, &grid[0])
            } else {
                optimize_scheme_scored(values, m, &grid).map(|s| s.scheme)
            }
        }
        Binning::Opt => {
            let mut best: Option<(Option<f64>, BinningScheme)> = None;
            for m in Method::ALL {
                let Ok(s) = optimize_scheme_scored(values, m, &candidates(m)) else {
                    continue;
                };
                // `None < Some(_)`, so unscored single-bin schemes rank last.
                if best.as_ref().is_none_or(|(score, _)| s.score > *score) {
                    best = Some((s.score, s.scheme));
                }
            }
            best.map(|(_, s)| s)
                .ok_or_else(|| Error::OptimizationFailed {
                    method: "opt".into(),
                })
        }
    }
}

impl Preprocessor {
    /// Fits encodings on `train`. Rule learners bin every numeric column with
    /// more than two distinct values; the tree learner bins only the target.
    pub fn fit(train: &Table, config: &ExperimentConfig) -> Result<Self> {
        let target_idx = train
            .column_index(&config.target)
            .ok_or_else(|| Error::input(format!("target column {} not found", config.target)))?;
        let bin = |name: &str, col: &Column| -> Result<ColumnEncoding> {
            let attribute = name.to_string();
            Ok(match col {
                Column::Categorical(_) => ColumnEncoding::Categorical { attribute },
                Column::Numeric(v) if distinct_count(v) <= 2 => {
                    ColumnEncoding::Exempt { attribute }
                }
                Column::Numeric(v) => {
                    let scheme = fit_scheme(v, config.binning, config.bins, config.seed)
                        .map_err(|e| Error::input(format!("column {name}: {e}")))?
                        .named(name);
                    ColumnEncoding::Binned { attribute, scheme }
                }
            })
        };
        let target = bin(&config.target, &train.columns[target_idx])?;
        let mut features = Vec::new();
        for (i, (name, col)) in train.headers.iter().zip(&train.columns).enumerate() {
            if i == target_idx {
                continue;
            }
            features.push(match config.learner {
                Learner::Dectree => match col {
                    Column::Numeric(_) => ColumnEncoding::Continuous {
                        attribute: name.clone(),
                    },
                    Column::Categorical(v) => {
                        let mut categories = v.clone();
                        categories.sort();
                        categories.dedup();
                        ColumnEncoding::Ordinal {
                            attribute: name.clone(),
                            categories,
                        }
                    }
                },
                _ => bin(name, col)?,
            });
        }
        Ok(Preprocessor { target, features })
    }

    pub fn schemes(&self) -> Vec<&BinningScheme> {
        std::iter::once(&self.target)
            .chain(&self.features)
            .filter_map(|e| match e {
                ColumnEncoding::Binned { scheme, .. } => Some(scheme),
                _ => None,
            })
            .collect()
    }

    fn column<'a>(&self, table: &'a Table, enc: &ColumnEncoding) -> Result<&'a Column> {
        table
            .column(enc.attribute())
            .ok_or_else(|| Error::input(format!("column {} not found", enc.attribute())))
    }

    /// Encoded target value of every row.
    pub fn targets(&self, table: &Table) -> Result<Vec<Value>> {
        let col = self.column(table, &self.target)?;
        (0..table.n_rows())
            .map(|r| self.target.literal(col, r))
            .collect()
    }

    /// Every row as a literal set over features and target (if present).
    pub fn literal_rows(&self, table: &Table) -> Result<Vec<LiteralSet>> {
        let mut encs: Vec<(&ColumnEncoding, &Column)> = Vec::new();
        for e in &self.features {
            encs.push((e, self.column(table, e)?));
        }
        if let Some(col) = table.column(self.target.attribute()) {
            encs.push((&self.target, col));
        }
        (0..table.n_rows())
            .map(|r| {
                encs.iter()
                    .map(|(e, c)| Ok((e.attribute().to_string(), e.literal(c, r)?)))
                    .collect()
            })
            .collect()
    }

    pub fn tree_data(&self, table: &Table) -> Result<TreeData> {
        let mut cols = Vec::new();
        for e in &self.features {
            cols.push((e, self.column(table, e)?));
        }
        let x = (0..table.n_rows())
            .map(|r| {
                cols.iter()
                    .map(|(e, c)| e.feature(c, r))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let y = match table.column(self.target.attribute()) {
            Some(_) => self.targets(table)?,
            None => vec![Value::Int(0); table.n_rows()],
        };
        TreeData::new(
            self.features
                .iter()
                .map(|e| e.attribute().to_string())
                .collect(),
            x,
            y,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "snake_case")]
pub enum LearnedModel {
    PrunedSearch { theory: Theory },
    Hero { rules: RuleList },
    Dectree { tree: Tree, rules: Vec<TreeRule> },
}

/// A learned model together with the encodings needed to apply it to raw data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub target: String,
    /// Absent when the model was learned directly from a case model.
    pub preprocessor: Option<Preprocessor>,
    pub model: LearnedModel,
}

impl TrainedModel {
    pub fn predict_literals(&self, rows: &[LiteralSet]) -> Result<Vec<Option<Value>>> {
        match &self.model {
            LearnedModel::PrunedSearch { theory } => Ok(rows
                .iter()
                .map(|r| predict_theory(theory, r, &self.target))
                .collect()),
            LearnedModel::Hero { rules } => Ok(rows
                .iter()
                .map(|r| predict_rule_list(rules, r, &self.target))
                .collect()),
            LearnedModel::Dectree { .. } => Err(Error::input(
                "a decision tree needs a table with continuous features",
            )),
        }
    }

    pub fn predict_table(&self, table: &Table) -> Result<Vec<Option<Value>>> {
        let pre = self
            .preprocessor
            .as_ref()
            .ok_or_else(|| Error::input("this model was learned from a case model, not a table"))?;
        match &self.model {
            LearnedModel::Dectree { tree, .. } => {
                let data = pre.tree_data(table)?;
                Ok(data
                    .x
                    .iter()
                    .map(|x| Some(tree.predict(x).clone()))
                    .collect())
            }
            _ => self.predict_literals(&pre.literal_rows(table)?),
        }
    }

    /// Predictions paired with the encoded actual values.
    pub fn score_table(&self, table: &Table) -> Result<EvalReport> {
        let pre = self
            .preprocessor
            .as_ref()
            .ok_or_else(|| Error::input("this model was learned from a case model, not a table"))?;
        let actual = pre.targets(table)?;
        let predicted = self.predict_table(table)?;
        evaluate(&predicted.into_iter().zip(actual).collect::<Vec<_>>())
    }
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub config: ExperimentConfig,
    pub n_train: usize,
    pub n_test: usize,
    pub train: EvalReport,
    pub test: EvalReport,
    /// Wall-clock time of the learning step.
    pub train_ms: f64,
    pub model: TrainedModel,
}

fn learn(
    config: &ExperimentConfig,
    pre: Option<&Preprocessor>,
    train: Learnable<'_>,
) -> Result<LearnedModel> {
    match (config.learner, train) {
        (Learner::PrunedSearch, Learnable::Cases(model)) => Ok(LearnedModel::PrunedSearch {
            theory: learn_pruned(model, &config.search_config())?,
        }),
        (Learner::Hero, Learnable::Cases(model)) => Ok(LearnedModel::Hero {
            rules: learn_hero(model.cases(), &config.target)?,
        }),
        (Learner::Dectree, Learnable::Table(table)) => {
            let pre = pre.ok_or_else(|| Error::invariant("tree learning without encodings"))?;
            let data = pre.tree_data(table)?;
            let params = tune_tree(
                &data,
                &default_grid(config.seed),
                TREE_CV_FOLDS.min(data.len()).max(2),
                config.seed,
            )?;
            let tree = learn_tree(&data, &params)?;
            let rules = tree_to_rules(&tree);
            Ok(LearnedModel::Dectree { tree, rules })
        }
        (Learner::Dectree, Learnable::Cases(_)) => Err(Error::input(
            "the decision tree learner needs a CSV table, not a case model",
        )),
        (_, Learnable::Table(_)) => Err(Error::invariant("rule learners take a case model")),
    }
}

enum Learnable<'a> {
    Cases(&'a CaseModel),
    Table(&'a Table),
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64() * 1e3))
}

/// Runs the configured pipeline and writes outputs if `output_dir` is set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let outcome = if config.is_case_model() {
        let json = std::fs::read_to_string(&config.dataset_path)
            .map_err(|e| {
                Error::input(format!(
                    "cannot read {}: {e}",
                    config.dataset_path.display()
                ))
            })
            .stage("load")?;
        let model = CaseModel::from_json(&json).stage("load")?;
        run_on_case_model(config, &model)?
    } else {
        let table = load_csv(&config.dataset_path).stage("load")?;
        run_on_table(config, &table)?
    };
    if let Some(dir) = &config.output_dir {
        write_outputs(&outcome, dir).stage("write")?;
    }
    Ok(outcome)
}

/// The pipeline on an already loaded table; outputs are not written.
pub fn run_on_table(config: &ExperimentConfig, table: &Table) -> Result<ExperimentOutcome> {
    config.validate()?;
    let (train, test) = if config.split_fraction >= 1.0 {
        (table.clone(), table.clone())
    } else {
        if table.n_rows() < 2 {
            return Err(Error::input("need at least two rows to split")).stage("split");
        }
        let (tr, te) = split_indices(table.n_rows(), config.split_fraction, config.seed);
        (table.select_rows(&tr), table.select_rows(&te))
    };
    let pre = Preprocessor::fit(&train, config).stage("discretize")?;
    let (learned, train_ms) = match config.learner {
        Learner::Dectree => timed(|| learn(config, Some(&pre), Learnable::Table(&train))),
        _ => {
            let rows = pre.literal_rows(&train).stage("discretize")?;
            let model = build_case_model(&rows).stage("discretize")?;
            timed(|| learn(config, Some(&pre), Learnable::Cases(&model)))
        }
    }
    .stage("learn")?;
    let model = TrainedModel {
        target: config.target.clone(),
        preprocessor: Some(pre),
        model: learned,
    };
    let mut train_report = model.score_table(&train).stage("evaluate")?;
    let test_report = model.score_table(&test).stage("evaluate")?;
    train_report.runtime_ms = train_ms;
    Ok(ExperimentOutcome {
        config: config.clone(),
        n_train: train.n_rows(),
        n_test: test.n_rows(),
        train: train_report,
        test: test_report,
        train_ms,
        model,
    })
}

/// The pipeline on a case model. Cases are expanded by weight into rows; a
/// split fraction below 1 splits those rows before the model is rebuilt.
pub fn run_on_case_model(
    config: &ExperimentConfig,
    model: &CaseModel,
) -> Result<ExperimentOutcome> {
    config.validate()?;
    if !model.attributes().contains_key(&config.target) {
        return Err(Error::input(format!(
            "target {} not in the case model",
            config.target
        )))
        .stage("load");
    }
    let rows: Vec<LiteralSet> = model
        .cases()
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.literals.clone(), c.weight as usize))
        .collect();
    let (train_rows, test_rows) = if config.split_fraction >= 1.0 {
        (rows.clone(), rows)
    } else {
        if rows.len() < 2 {
            return Err(Error::input("need at least two rows to split")).stage("split");
        }
        let (tr, te) = split_indices(rows.len(), config.split_fraction, config.seed);
        (
            tr.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>(),
            te.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>(),
        )
    };
    let train_model = build_case_model(&train_rows).stage("split")?;
    let (learned, train_ms) =
        timed(|| learn(config, None, Learnable::Cases(&train_model))).stage("learn")?;
    let trained = TrainedModel {
        target: config.target.clone(),
        preprocessor: None,
        model: learned,
    };
    let score = |rows: &[LiteralSet]| -> Result<EvalReport> {
        let rows: Vec<&LiteralSet> = rows
            .iter()
            .filter(|r| r.has_attribute(&config.target))
            .collect();
        let owned: Vec<LiteralSet> = rows.iter().map(|r| (*r).clone()).collect();
        let predicted = trained.predict_literals(&owned)?;
        let actual = rows
            .iter()
            .map(|r| r.get(&config.target).expect("filtered").clone());
        evaluate(&predicted.into_iter().zip(actual).collect::<Vec<_>>())
    };
    let mut train = score(&train_rows).stage("evaluate")?;
    let test = score(&test_rows).stage("evaluate")?;
    train.runtime_ms = train_ms;
    Ok(ExperimentOutcome {
        config: config.clone(),
        n_train: train_rows.len(),
        n_test: test_rows.len(),
        train,
        test,
        train_ms,
        model: trained,
    })
}

pub const TABLE_HEADER: [&str; 7] = [
    "data type",
    "binning method",
    "# bins",
    "search depth",
    "max # premises",
    "accuracy",
    "F1",
];

/// The training and test rows of the results table for one run.
pub fn table_rows(outcome: &ExperimentOutcome) -> [[String; 7]; 2] {
    let c = &outcome.config;
    let method = match c.binning {
        Binning::Method(m) => m.table_label().to_string(),
        Binning::Opt => "opt".to_string(),
    };
    let bins = match (c.binning, c.bins) {
        (Binning::Method(Method::Dbscan), _) => "--".to_string(),
        (_, b) => b.to_string(),
    };
    let (depth, premises) = match c.learner {
        Learner::PrunedSearch => (
            c.exception_depth.to_string(),
            c.max_premise_size.to_string(),
        ),
        _ => ("--".to_string(), "--".to_string()),
    };
    let row = |kind: &str, r: &EvalReport| {
        [
            kind.to_string(),
            method.clone(),
            bins.clone(),
            depth.clone(),
            premises.clone(),
            format!("{:.4}", r.accuracy),
            format!("{:.4}", r.weighted_f1),
        ]
    };
    [row("training", &outcome.train), row("test", &outcome.test)]
}

/// Plain-text results table with one training and one test row per run.
pub fn format_table(outcomes: &[ExperimentOutcome]) -> String {
    let mut out = format!("| {} |\n", TABLE_HEADER.join(" | "));
    out.push_str(&format!("|{}\n", "---|".repeat(TABLE_HEADER.len())));
    for o in outcomes {
        for row in table_rows(o) {
            out.push_str(&format!("| {} |\n", row.join(" | ")));
        }
    }
    out
}

/// Serializable summary without the model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportFile<'a> {
    pub config: &'a ExperimentConfig,
    pub n_train: usize,
    pub n_test: usize,
    pub train: &'a EvalReport,
    pub test: &'a EvalReport,
    pub train_ms: f64,
}

impl<'a> ReportFile<'a> {
    pub fn of(o: &'a ExperimentOutcome) -> Self {
        ReportFile {
            config: &o.config,
            n_train: o.n_train,
            n_test: o.n_test,
            train: &o.train,
            test: &o.test,
            train_ms: o.train_ms,
        }
    }
}

/// Writes `model.json`, `report.json` and `report.txt` into `dir`.
pub fn write_outputs(outcome: &ExperimentOutcome, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(
        dir.join("model.json"),
        serde_json::to_string_pretty(&outcome.model)?,
    )?;
    std::fs::write(
        dir.join("report.json"),
        serde_json::to_string_pretty(&ReportFile::of(outcome))?,
    )?;
    std::fs::write(
        dir.join("report.txt"),
        format_table(std::slice::from_ref(outcome)),
    )?;
    Ok(())
}
