//! Tabular data handling: loading, encoding, splitting, standardization, and
//! synthetic fixtures.

mod csv_io;
mod scale;
mod schema;
mod snapshots;
mod split;
mod synth;

pub use csv_io::{export_csv, load_csv, load_csv_str};
pub use scale::{apply_standardize, fit_standardize, ScalerParams};
pub use schema::{BinaryTokens, ColumnRole, Schema};
pub use snapshots::{
    covid_snapshot, covid_snapshot_with_rows, heart_snapshot, lung_snapshot, Snapshot,
    COVID_FULL_ROWS, COVID_SUBSAMPLE_ROWS,
};
pub use split::{stratified_split, SplitPair};
pub use synth::synth_dataset;

use ndarray::{Array2, ArrayView2};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed CSV in {path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("label column {0:?} absent from CSV header")]
    LabelColumnAbsent(String),
    #[error("no data rows")]
    NoDataRows,
    #[error("row {row}: missing cell in column {column:?}")]
    MissingCell { row: usize, column: String },
    #[error("row {row}, column {column:?}: unmapped categorical value {value:?}")]
    UnmappedValue {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}, column {column:?}: {value:?} is not numeric")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("non-finite value at row {row}, column {column:?}")]
    NonFinite { row: usize, column: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("split ratio {0} outside (0, 1)")]
    RatioOutOfRange(f64),
    #[error("class {0} has a single sample; stratified split needs at least 2 per class")]
    SingleSampleClass(usize),
    #[error("scaler has {params} columns but data has {data}")]
    ScalerMismatch { params: usize, data: usize },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

/// Dense numeric feature matrix with named columns and 0-based class labels.
///
/// The universal container every other module consumes. Construction
/// validates shape agreement, label range, and finiteness.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    features: Array2<f64>,
    feature_names: Vec<String>,
    labels: Vec<usize>,
    n_classes: usize,
    label_name: String,
}

impl DataMatrix {
    pub fn new(
        features: Array2<f64>,
        feature_names: Vec<String>,
        labels: Vec<usize>,
        n_classes: usize,
    ) -> Result<Self, DataError> {
        Self::with_label_name(features, feature_names, labels, n_classes, "label")
    }

    pub fn with_label_name(
        features: Array2<f64>,
        feature_names: Vec<String>,
        labels: Vec<usize>,
        n_classes: usize,
        label_name: &str,
    ) -> Result<Self, DataError> {
        if features.nrows() != labels.len() {
            return Err(DataError::Shape(format!(
                "{} feature rows vs {} labels",
                features.nrows(),
                labels.len()
            )));
        }
        if features.ncols() != feature_names.len() {
            return Err(DataError::Shape(format!(
                "{} feature columns vs {} names",
                features.ncols(),
                feature_names.len()
            )));
        }
        if n_classes == 0 {
            return Err(DataError::Shape("n_classes must be positive".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
            return Err(DataError::Shape(format!(
                "label {bad} outside [0, {n_classes})"
            )));
        }
        for ((r, c), v) in features.indexed_iter() {
            if !v.is_finite() {
                return Err(DataError::NonFinite {
                    row: r,
                    column: feature_names[c].clone(),
                });
            }
        }
        Ok(Self {
            features,
            feature_names,
            labels,
            n_classes,
            label_name: label_name.to_string(),
        })
    }

    pub fn features(&self) -> ArrayView2<'_, f64> {
        self.features.view()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    pub fn n_rows(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    /// New matrix holding only the given feature columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self, DataError> {
        for &c in columns {
            if c >= self.n_features() {
                return Err(DataError::Shape(format!(
                    "column index {c} outside 0..{}",
                    self.n_features()
                )));
            }
        }
        let mut features = Array2::zeros((self.n_rows(), columns.len()));
        for (out_c, &c) in columns.iter().enumerate() {
            features.column_mut(out_c).assign(&self.features.column(c));
        }
        let feature_names = columns
            .iter()
            .map(|&c| self.feature_names[c].clone())
            .collect();
        Ok(Self {
            features,
            feature_names,
            labels: self.labels.clone(),
            n_classes: self.n_classes,
            label_name: self.label_name.clone(),
        })
    }

    /// New matrix holding only the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self, DataError> {
        let mut features = Array2::zeros((rows.len(), self.n_features()));
        let mut labels = Vec::with_capacity(rows.len());
        for (out_r, &r) in rows.iter().enumerate() {
            if r >= self.n_rows() {
                return Err(DataError::Shape(format!(
                    "row index {r} outside 0..{}",
                    self.n_rows()
                )));
            }
            features.row_mut(out_r).assign(&self.features.row(r));
            labels.push(self.labels[r]);
        }
        Ok(Self {
            features,
            feature_names: self.feature_names.clone(),
            labels,
            n_classes: self.n_classes,
            label_name: self.label_name.clone(),
        })
    }

    /// Per-class row counts, indexed by class id.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// SHA-256 over the canonical byte encoding of shape, names, features,
    /// and labels. Used as the dataset fingerprint in reports.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n_rows() as u64).to_le_bytes());
        h.update((self.n_features() as u64).to_le_bytes());
        h.update((self.n_classes as u64).to_le_bytes());
        for name in &self.feature_names {
            h.update(name.as_bytes());
            h.update([0u8]);
        }
        h.update(self.label_name.as_bytes());
        h.update([0u8]);
        for v in self.features.iter() {
            h.update(v.to_le_bytes());
        }
        for &l in &self.labels {
            h.update((l as u64).to_le_bytes());
        }
        format!("{:x}", h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn small() -> DataMatrix {
        DataMatrix::new(
            array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]],
            vec!["a".into(), "b".into()],
            vec![0, 1, 0],
            2,
        )
        .unwrap()
    }

    #[test]
    fn rejects_shape_mismatch() {
        let err = DataMatrix::new(
            array![[1.0], [2.0]],
            vec!["a".into()],
            vec![0],
            1,
        )
        .unwrap_err();
        assert!(matches!(err, DataError::Shape(_)));
    }

    #[test]
    fn rejects_out_of_range_label() {
        let err = DataMatrix::new(array![[1.0], [2.0]], vec!["a".into()], vec![0, 2], 2)
            .unwrap_err();
        assert!(matches!(err, DataError::Shape(_)));
    }

    #[test]
    fn rejects_non_finite() {
        let err = DataMatrix::new(
            array![[1.0], [f64::NAN]],
            vec!["a".into()],
            vec![0, 1],
            2,
        )
        .unwrap_err();
        assert!(matches!(err, DataError::NonFinite { row: 1, .. }));
    }

    #[test]
    fn select_columns_reorders() {
        let d = small();
        let picked = d.select_columns(&[1, 0]).unwrap();
        assert_eq!(picked.feature_names(), &["b".to_string(), "a".to_string()]);
        assert_eq!(picked.features()[[0, 0]], 2.0);
        assert_eq!(picked.features()[[0, 1]], 1.0);
    }

    #[test]
    fn digest_changes_with_content() {
        let d = small();
        let mut other = d.clone();
        other.features[[0, 0]] = 9.0;
        assert_ne!(d.digest(), other.digest());
        assert_eq!(d.digest(), small().digest());
    }
}
