//! Shared inputs for the benchmarks.

use std::path::PathBuf;

use arglearn::experiment::Preprocessor;
use arglearn::{
    build_case_model, load_csv, Binning, Bins, CaseModel, ExperimentConfig, Learner, Method, Table,
};

pub fn boston() -> Table {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/boston_housing.csv");
    load_csv(path).expect("bundled dataset loads")
}

pub fn boston_config(learner: Learner, method: Method) -> ExperimentConfig {
    let mut c = ExperimentConfig::new("boston_housing.csv", "MEDV", learner);
    c.binning = Binning::Method(method);
    c.bins = Bins::Fixed(2);
    c
}

/// The whole table binned with `method` and grouped into cases.
pub fn boston_cases(method: Method) -> CaseModel {
    let table = boston();
    let config = boston_config(Learner::PrunedSearch, method);
    let pre = Preprocessor::fit(&table, &config).expect("binning succeeds");
    build_case_model(&pre.literal_rows(&table).expect("rows encode")).expect("non-empty")
}

pub fn column(table: &Table, name: &str) -> Vec<f64> {
    match table.column(name) {
        Some(arglearn::Column::Numeric(v)) => v.clone(),
        _ => panic!("{name} is not a numeric column"),
    }
}
