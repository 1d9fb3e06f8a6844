//! Classification metrics: accuracy, precision/recall/F1, confusion matrix.
//!
//! Binary problems score class 1 as the positive class; multiclass problems
//! report unweighted macro averages. Zero-denominator cases yield 0.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("y_true has {true_len} entries but y_pred has {pred_len}")]
    LengthMismatch { true_len: usize, pred_len: usize },
    #[error("empty label vectors")]
    Empty,
    #[error("label {0} outside [0, {1})")]
    LabelOutOfRange(usize, usize),
}

/// Quality measures for one prediction run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// `confusion[t][p]` counts rows with true class `t` predicted as `p`.
    pub confusion: Vec<Vec<usize>>,
    /// `"1"` for binary scoring of class 1, `"macro"` for multiclass.
    pub positive_label: String,
}

pub fn evaluate(
    y_true: &[usize],
    y_pred: &[usize],
    n_classes: usize,
) -> Result<MetricsReport, MetricsError> {
    if y_true.len() != y_pred.len() {
        return Err(MetricsError::LengthMismatch {
            true_len: y_true.len(),
            pred_len: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(MetricsError::Empty);
    }
    for &l in y_true.iter().chain(y_pred) {
        if l >= n_classes {
            return Err(MetricsError::LabelOutOfRange(l, n_classes));
        }
    }

    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        confusion[t][p] += 1;
    }
    let correct: usize = (0..n_classes).map(|c| confusion[c][c]).sum();
    let accuracy = correct as f64 / y_true.len() as f64;

    let class_precision = |c: usize| -> f64 {
        let predicted: usize = (0..n_classes).map(|t| confusion[t][c]).sum();
        ratio(confusion[c][c], predicted)
    };
    let class_recall = |c: usize| -> f64 {
        let actual: usize = confusion[c].iter().sum();
        ratio(confusion[c][c], actual)
    };

    let (precision, recall, positive_label) = if n_classes == 2 {
        (class_precision(1), class_recall(1), "1".to_string())
    } else {
        let p = (0..n_classes).map(class_precision).sum::<f64>() / n_classes as f64;
        let r = (0..n_classes).map(class_recall).sum::<f64>() / n_classes as f64;
        (p, r, "macro".to_string())
    };
    let f1 = if n_classes == 2 {
        harmonic(precision, recall)
    } else {
        // Macro F1 averages per-class F1, not the harmonic of macro P/R.
        (0..n_classes)
            .map(|c| harmonic(class_precision(c), class_recall(c)))
            .sum::<f64>()
            / n_classes as f64
    };

    Ok(MetricsReport {
        accuracy,
        precision,
        recall,
        f1,
        confusion,
        positive_label,
    })
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}
