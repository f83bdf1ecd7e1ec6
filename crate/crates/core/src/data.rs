//! Typed CSV tables and seeded train/test splits.

use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum Column {
    Numeric(Vec<f64>),
    Categorical(Vec<String>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn select(&self, rows: &[usize]) -> Column {
        match self {
            Column::Numeric(v) => Column::Numeric(rows.iter().map(|&i| v[i]).collect()),
            Column::Categorical(v) => {
                Column::Categorical(rows.iter().map(|&i| v[i].clone()).collect())
            }
        }
    }
}

/// Column-major table with one header per column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Column>,
}

impl Table {
    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Column::len)
    }

    pub fn n_cols(&self) -> usize {
        self.headers.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.column_index(name).map(|i| &self.columns[i])
    }

    pub fn select_rows(&self, rows: &[usize]) -> Table {
        Table {
            headers: self.headers.clone(),
            columns: self.columns.iter().map(|c| c.select(rows)).collect(),
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Table> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)
        .map_err(|e| Error::input(format!("cannot open {}: {e}", path.display())))?;
    read_csv(file)
}

/// Parses comma-separated data with a header line.
///
/// A column is numeric when its first data cell parses as a number; every
/// later cell of a numeric column must then parse too. Errors name the
/// offending line (the header is line 1).
pub fn read_csv<R: Read>(reader: R) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if headers.is_empty() || headers.iter().all(String::is_empty) {
        return Err(Error::input("missing header line"));
    }
    if let Some(h) = headers.iter().find(|h| h.is_empty()) {
        return Err(Error::input(format!("empty column name in header: {h:?}")));
    }
    let mut columns: Option<Vec<Column>> = None;
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths {
                expected_len, len, ..
            } => Error::input(format!(
                "line {line}: expected {expected_len} fields, found {len}"
            )),
            _ => Error::input(format!("line {line}: {e}")),
        })?;
        let cols = columns.get_or_insert_with(|| {
            record
                .iter()
                .map(|cell| match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => Column::Numeric(Vec::new()),
                    _ => Column::Categorical(Vec::new()),
                })
                .collect()
        });
        for (j, (cell, col)) in record.iter().zip(cols.iter_mut()).enumerate() {
            if cell.is_empty() {
                return Err(Error::input(format!(
                    "line {line}: empty cell in column {}",
                    headers[j]
                )));
            }
            match col {
                Column::Numeric(v) => match cell.parse::<f64>() {
                    Ok(x) if x.is_finite() => v.push(x),
                    _ => {
                        return Err(Error::input(format!(
                            "line {line}: column {} expects a number, found {cell:?}",
                            headers[j]
                        )))
                    }
                },
                Column::Categorical(v) => v.push(cell.to_string()),
            }
        }
    }
    let columns = columns.ok_or_else(|| Error::input("table has no data rows"))?;
    Ok(Table { headers, columns })
}

/// Seeded shuffle, then the first `round(fraction · n)` rows (at least one,
/// leaving at least one) train and the rest test.
pub fn split(table: &Table, fraction: f64, seed: u64) -> Result<(Table, Table)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::input(format!(
            "split fraction must be in (0, 1), got {fraction}"
        )));
    }
    let n = table.n_rows();
    if n < 2 {
        return Err(Error::input(format!(
            "cannot split {n} rows into two parts"
        )));
    }
    let (train, test) = split_indices(n, fraction, seed);
    Ok((table.select_rows(&train), table.select_rows(&test)))
}

pub(crate) fn split_indices(n: usize, fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = ((n as f64 * fraction).round() as usize).clamp(1, n - 1);
    let test = idx.split_off(n_train);
    (idx, test)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize) -> Table {
        Table {
            headers: vec!["x".into()],
            columns: vec![Column::Numeric((0..n).map(|i| i as f64).collect())],
        }
    }

    #[test]
    fn typed_columns() {
        let t = read_csv("a,b,c\n1,x,2.5\n2,y,3\n".as_bytes()).unwrap();
        assert_eq!(t.n_rows(), 2);
        assert_eq!(t.columns[0], Column::Numeric(vec![1.0, 2.0]));
        assert_eq!(
            t.columns[1],
            Column::Categorical(vec!["x".into(), "y".into()])
        );
    }

    #[test]
    fn header_only_is_empty_table() {
        let err = read_csv("a,b\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("no data rows"));
    }

    #[test]
    fn bad_cell_names_line() {
        let err = read_csv("a,b\n1,2\n3,oops\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn ragged_row_names_line() {
        let err = read_csv("a,b\n1,2\n3\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn split_sizes_and_determinism() {
        let t = table(10);
        let (a, b) = split(&t, 0.8, 7).unwrap();
        assert_eq!((a.n_rows(), b.n_rows()), (8, 2));
        assert_eq!(split(&t, 0.8, 7).unwrap(), (a, b));
        assert!(split(&table(1), 0.8, 0).is_err());
    }

    #[test]
    fn split_partitions_rows() {
        let (train, test) = split_indices(50, 0.8, 3);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..50).collect::<Vec<_>>());
    }
}
