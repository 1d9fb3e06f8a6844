//! Column standardization fit on training rows only.

use super::{DataError, DataMatrix};

/// Per-column mean and population standard deviation from a training set.
/// Columns with zero standard deviation are passed through unchanged when
/// applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalerParams {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

pub fn fit_standardize(train: &DataMatrix) -> ScalerParams {
    let n = train.n_rows() as f64;
    let mut mean = Vec::with_capacity(train.n_features());
    let mut std = Vec::with_capacity(train.n_features());
    for c in 0..train.n_features() {
        let column = train.features().column(c).to_owned();
        let m = column.sum() / n;
        let var = column.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
        mean.push(m);
        std.push(var.sqrt());
    }
    ScalerParams { mean, std }
}

/// Transform each column to `(x - mean) / std` using the fitted statistics;
/// zero-std columns and labels are untouched.
pub fn apply_standardize(d: &DataMatrix, p: &ScalerParams) -> Result<DataMatrix, DataError> {
    if p.mean.len() != d.n_features() {
        return Err(DataError::ScalerMismatch {
            params: p.mean.len(),
            data: d.n_features(),
        });
    }
    let mut features = d.features().to_owned();
    for c in 0..d.n_features() {
        if p.std[c] == 0.0 {
            continue;
        }
        for v in features.column_mut(c).iter_mut() {
            *v = (*v - p.mean[c]) / p.std[c];
        }
    }
    DataMatrix::with_label_name(
        features,
        d.feature_names().to_vec(),
        d.labels().to_vec(),
        d.n_classes(),
        d.label_name(),
    )
}
