//! Bundled benchmark suites: every classifier crossed with every
//! feature-evaluation method on one dataset, collected into a flat results
//! table plus per-figure CSV exports.
//!
//! A suite is one dataset: the three bundled snapshots (`lung`, `heart`,
//! `covid`) or the planted-signal `synth` generator. One evaluator run per
//! classifier already measures all five methods — the all-features baseline,
//! the three engine selections, and the fused AFE selection — so the 6x5
//! grid costs six pipeline runs.

use crate::afe::{run_afe, AfeConfig, AfeError};
use crate::data::{
    covid_snapshot, covid_snapshot_with_rows, heart_snapshot, lung_snapshot, synth_dataset,
    DataError, DataMatrix, COVID_FULL_ROWS,
};
use crate::metrics::MetricsReport;
use crate::models::{ClassifierSpec, Kind};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Suite names accepted by `--suite`, in display order.
pub const SUITES: [&str; 4] = ["lung", "heart", "covid", "synth"];

/// The six classifier families, in table order.
pub const ALGORITHMS: [Kind; 6] = [Kind::Lr, Kind::Dt, Kind::Gnb, Kind::Rf, Kind::Mlp, Kind::Gb];

/// Feature-evaluation methods, in table order. `Xai` is the Shapley column.
pub const METHODS: [BenchMethod; 5] = [
    BenchMethod::Baseline,
    BenchMethod::Pct,
    BenchMethod::Xai,
    BenchMethod::Ga,
    BenchMethod::Afe,
];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown suite {0:?} (expected lung|heart|covid|synth)")]
    UnknownSuite(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Afe(#[from] AfeError),
}

/// How a classifier's features were chosen for one results row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BenchMethod {
    /// All features, no selection.
    #[serde(rename = "baseline")]
    Baseline,
    /// Median selection on permutation importance.
    #[serde(rename = "PCT")]
    Pct,
    /// Median selection on mean |Shapley| attribution.
    #[serde(rename = "XAI")]
    Xai,
    /// Median selection on genetic-search inclusion frequency.
    #[serde(rename = "GA")]
    Ga,
    /// Median selection on the fused importance vector.
    #[serde(rename = "AFE")]
    Afe,
}

impl BenchMethod {
    pub fn name(self) -> &'static str {
        match self {
            BenchMethod::Baseline => "baseline",
            BenchMethod::Pct => "PCT",
            BenchMethod::Xai => "XAI",
            BenchMethod::Ga => "GA",
            BenchMethod::Afe => "AFE",
        }
    }
}

/// One cell of the benchmark grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub dataset: String,
    /// Long classifier label, e.g. `random-forest`.
    pub algorithm: String,
    pub method: BenchMethod,
    pub accuracy: f64,
    pub f1: f64,
    pub recall: f64,
    pub precision: f64,
}

/// The full grid for one suite: `ALGORITHMS.len() * METHODS.len()` rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkTable {
    pub suite: String,
    pub seed: u64,
    pub rows: Vec<BenchmarkRow>,
}

impl BenchmarkTable {
    /// Rows for one algorithm, in method order.
    pub fn rows_for(&self, algorithm: Kind) -> Vec<&BenchmarkRow> {
        self.rows
            .iter()
            .filter(|r| r.algorithm == algorithm.label())
            .collect()
    }

    /// The row for one (algorithm, method) cell.
    pub fn cell(&self, algorithm: Kind, method: BenchMethod) -> Option<&BenchmarkRow> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm.label() && r.method == method)
    }
}

/// Resolve a suite name to its dataset. Bundled snapshots ignore `seed`
/// (their contents are frozen); the synthetic suite derives from it.
/// `covid_full` swaps the 10k subsample for the full-scale variant.
pub fn suite_data(suite: &str, seed: u64, covid_full: bool) -> Result<DataMatrix, BenchError> {
    match suite {
        "lung" => Ok(lung_snapshot().data()?),
        "heart" => Ok(heart_snapshot().data()?),
        "covid" => {
            let snap = if covid_full {
                covid_snapshot_with_rows(COVID_FULL_ROWS)
            } else {
                covid_snapshot()
            };
            Ok(snap.data()?)
        }
        "synth" => Ok(synth_dataset(600, 2, 6, seed)),
        other => Err(BenchError::UnknownSuite(other.to_string())),
    }
}

fn row_from(dataset: &str, algorithm: Kind, method: BenchMethod, m: &MetricsReport) -> BenchmarkRow {
    BenchmarkRow {
        dataset: dataset.to_string(),
        algorithm: algorithm.label().to_string(),
        method,
        accuracy: m.accuracy,
        f1: m.f1,
        recall: m.recall,
        precision: m.precision,
    }
}

/// Run the whole grid for one suite. `base` supplies every evaluator setting
/// except the classifier, which is iterated over [`ALGORITHMS`] with default
/// hyperparameters and the master seed.
pub fn run_benchmark(suite: &str, base: &AfeConfig, covid_full: bool) -> Result<BenchmarkTable, BenchError> {
    let data = suite_data(suite, base.seed, covid_full)?;
    let mut rows = Vec::with_capacity(ALGORITHMS.len() * METHODS.len());
    for kind in ALGORITHMS {
        let cfg = AfeConfig {
            classifier: ClassifierSpec::with_defaults(kind, base.seed),
            ..base.clone()
        };
        let report = run_afe(&cfg, &data)?;
        rows.push(row_from(suite, kind, BenchMethod::Baseline, &report.baseline_metrics));
        for outcome in &report.per_method {
            let method = match outcome.method {
                crate::importance::Method::Pct => BenchMethod::Pct,
                crate::importance::Method::Shap => BenchMethod::Xai,
                crate::importance::Method::Ga => BenchMethod::Ga,
                crate::importance::Method::Afe => unreachable!("per-method list holds engines"),
            };
            rows.push(row_from(suite, kind, method, &outcome.metrics));
        }
        rows.push(row_from(suite, kind, BenchMethod::Afe, &report.afe_metrics));
    }
    Ok(BenchmarkTable {
        suite: suite.to_string(),
        seed: base.seed,
        rows,
    })
}

/// Flat CSV of the grid: `dataset,algorithm,method,accuracy,f1,recall,precision`.
pub fn table_csv(table: &BenchmarkTable) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["dataset", "algorithm", "method", "accuracy", "f1", "recall", "precision"])
        .expect("header writes");
    for row in &table.rows {
        writer
            .write_record([
                row.dataset.as_str(),
                row.algorithm.as_str(),
                row.method.name(),
                &row.accuracy.to_string(),
                &row.f1.to_string(),
                &row.recall.to_string(),
                &row.precision.to_string(),
            ])
            .expect("row writes");
    }
    let bytes = writer.into_inner().expect("Vec sink cannot fail");
    String::from_utf8(bytes).expect("CSV output is UTF-8")
}

/// Per-figure data files, one per metric: rows are algorithms, columns the
/// five methods. Returned as `(file_stem, csv_text)` pairs in figure order
/// (accuracy, f1, recall, precision).
pub fn figure_csvs(table: &BenchmarkTable) -> Vec<(&'static str, String)> {
    let metrics: [(&'static str, fn(&BenchmarkRow) -> f64); 4] = [
        ("figure_accuracy", |r| r.accuracy),
        ("figure_f1", |r| r.f1),
        ("figure_recall", |r| r.recall),
        ("figure_precision", |r| r.precision),
    ];
    metrics
        .into_iter()
        .map(|(stem, pick)| {
            let mut writer = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["algorithm".to_string()];
            header.extend(METHODS.iter().map(|m| m.name().to_string()));
            writer.write_record(&header).expect("header writes");
            for kind in ALGORITHMS {
                let mut record = vec![kind.label().to_string()];
                for method in METHODS {
                    let cell = table
                        .cell(kind, method)
                        .expect("complete grid has every cell");
                    record.push(pick(cell).to_string());
                }
                writer.write_record(&record).expect("row writes");
            }
            let bytes = writer.into_inner().expect("Vec sink cannot fail");
            (stem, String::from_utf8(bytes).expect("CSV output is UTF-8"))
        })
        .collect()
}
