//! Six classifiers behind one train/predict contract.
//!
//! Every model trains deterministically from a [`ClassifierSpec`] (kind,
//! hyperparameters, seed) and predicts through the same row-wise interface,
//! so the importance engines can treat them as interchangeable black boxes.
//! All stochastic steps draw from derived RNG streams, making fitted
//! parameters independent of thread count.

mod bayes;
mod boost;
mod forest;
mod logistic;
mod mlp;
mod tree;

pub(crate) use tree::{ClassTree, RegTree};

use crate::data::DataMatrix;
use ndarray::{Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid hyperparameters: {0}")]
    Invalid(String),
    #[error("training data is empty")]
    EmptyTraining,
    #[error("training data contains a single class")]
    SingleClass,
    #[error("model expects {expected} feature columns, input has {got}")]
    ColumnMismatch { expected: usize, got: usize },
    #[error("non-finite value produced during training")]
    NonFinite,
}

/// The six supported classifier families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Lr,
    Dt,
    Gnb,
    Rf,
    Mlp,
    Gb,
}

impl Kind {
    pub const ALL: [Kind; 6] = [Kind::Lr, Kind::Dt, Kind::Gnb, Kind::Rf, Kind::Mlp, Kind::Gb];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Lr => "lr",
            Kind::Dt => "dt",
            Kind::Gnb => "gnb",
            Kind::Rf => "rf",
            Kind::Mlp => "mlp",
            Kind::Gb => "gb",
        }
    }

    /// Long name used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            Kind::Lr => "logistic-regression",
            Kind::Dt => "decision-tree",
            Kind::Gnb => "gaussian-naive-bayes",
            Kind::Rf => "random-forest",
            Kind::Mlp => "mlp",
            Kind::Gb => "gradient-boosting",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lr" => Ok(Kind::Lr),
            "dt" => Ok(Kind::Dt),
            "gnb" => Ok(Kind::Gnb),
            "rf" => Ok(Kind::Rf),
            "mlp" => Ok(Kind::Mlp),
            "gb" => Ok(Kind::Gb),
            other => Err(format!(
                "unknown model {other:?} (expected lr|dt|gnb|rf|mlp|gb)"
            )),
        }
    }
}

/// Split-impurity criterion for tree-based models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Entropy,
    Gini,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LrParams {
    /// L2 penalty strength; the objective is mean cross-entropy plus
    /// `l2 / (2n) * ||w||^2` (bias unpenalized).
    pub l2: f64,
    pub max_iters: usize,
    /// Stop when the gradient norm falls below this.
    pub tol: f64,
}

impl Default for LrParams {
    fn default() -> Self {
        Self {
            l2: 1.0,
            max_iters: 1000,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DtParams {
    pub criterion: Criterion,
    /// `None` means unlimited depth.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for DtParams {
    fn default() -> Self {
        Self {
            criterion: Criterion::Entropy,
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GnbParams {
    /// Fraction of the largest column variance added to every class variance.
    pub var_smoothing: f64,
}

impl Default for GnbParams {
    fn default() -> Self {
        Self { var_smoothing: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RfParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    /// Features considered per split; `None` means `ceil(sqrt(p))`.
    pub max_features: Option<usize>,
    pub criterion: Criterion,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for RfParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            bootstrap: true,
            max_features: None,
            criterion: Criterion::Gini,
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpParams {
    pub hidden: usize,
    pub lr: f64,
    pub batch: usize,
    pub epochs: usize,
    /// Loss-stagnation stopping: end training early when the epoch loss
    /// fails to improve on the best seen by at least `tol` for `patience`
    /// consecutive epochs.
    pub tol: f64,
    pub patience: usize,
}

impl Default for MlpParams {
    fn default() -> Self {
        Self {
            hidden: 100,
            lr: 1e-3,
            batch: 32,
            epochs: 200,
            tol: 1e-4,
            patience: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GbParams {
    pub n_stages: usize,
    pub lr: f64,
    pub max_depth: usize,
    pub min_samples_split: usize,
}

impl Default for GbParams {
    fn default() -> Self {
        Self {
            n_stages: 100,
            lr: 0.1,
            max_depth: 3,
            min_samples_split: 2,
        }
    }
}

/// Per-kind hyperparameters, tagged by the `kind` field in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ModelConfig {
    #[serde(rename = "lr")]
    Lr(LrParams),
    #[serde(rename = "dt")]
    Dt(DtParams),
    #[serde(rename = "gnb")]
    Gnb(GnbParams),
    #[serde(rename = "rf")]
    Rf(RfParams),
    #[serde(rename = "mlp")]
    Mlp(MlpParams),
    #[serde(rename = "gb")]
    Gb(GbParams),
}

/// Everything needed to train a model: family, hyperparameters, and the
/// master seed its RNG streams derive from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    #[serde(flatten)]
    pub model: ModelConfig,
    #[serde(default)]
    pub seed: u64,
}

impl ClassifierSpec {
    /// Default hyperparameters for a model family.
    pub fn with_defaults(kind: Kind, seed: u64) -> Self {
        let model = match kind {
            Kind::Lr => ModelConfig::Lr(LrParams::default()),
            Kind::Dt => ModelConfig::Dt(DtParams::default()),
            Kind::Gnb => ModelConfig::Gnb(GnbParams::default()),
            Kind::Rf => ModelConfig::Rf(RfParams::default()),
            Kind::Mlp => ModelConfig::Mlp(MlpParams::default()),
            Kind::Gb => ModelConfig::Gb(GbParams::default()),
        };
        Self { model, seed }
    }

    pub fn kind(&self) -> Kind {
        match self.model {
            ModelConfig::Lr(_) => Kind::Lr,
            ModelConfig::Dt(_) => Kind::Dt,
            ModelConfig::Gnb(_) => Kind::Gnb,
            ModelConfig::Rf(_) => Kind::Rf,
            ModelConfig::Mlp(_) => Kind::Mlp,
            ModelConfig::Gb(_) => Kind::Gb,
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: &str| Err(ModelError::Invalid(msg.to_string()));
        match &self.model {
            ModelConfig::Lr(p) => {
                if p.l2 < 0.0 || !p.l2.is_finite() {
                    return bad("lr: l2 must be finite and >= 0");
                }
                if p.max_iters == 0 || p.tol <= 0.0 {
                    return bad("lr: max_iters >= 1 and tol > 0 required");
                }
            }
            ModelConfig::Dt(p) => {
                if p.min_samples_split < 2 {
                    return bad("dt: min_samples_split must be >= 2");
                }
            }
            ModelConfig::Gnb(p) => {
                if p.var_smoothing < 0.0 {
                    return bad("gnb: var_smoothing must be >= 0");
                }
            }
            ModelConfig::Rf(p) => {
                if p.n_trees == 0 {
                    return bad("rf: n_trees must be >= 1");
                }
                if p.max_features == Some(0) {
                    return bad("rf: max_features must be >= 1");
                }
                if p.min_samples_split < 2 {
                    return bad("rf: min_samples_split must be >= 2");
                }
            }
            ModelConfig::Mlp(p) => {
                if p.hidden == 0 {
                    return bad("mlp: hidden width must be >= 1");
                }
                if p.lr <= 0.0 || p.batch == 0 || p.epochs == 0 {
                    return bad("mlp: lr > 0, batch >= 1, epochs >= 1 required");
                }
            }
            ModelConfig::Gb(p) => {
                if p.n_stages == 0 || p.lr <= 0.0 {
                    return bad("gb: n_stages >= 1 and lr > 0 required");
                }
                if p.max_depth == 0 || p.min_samples_split < 2 {
                    return bad("gb: max_depth >= 1 and min_samples_split >= 2 required");
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Fitted {
    Lr(logistic::LrModel),
    Dt(ClassTree),
    Gnb(bayes::GnbModel),
    Rf(forest::ForestModel),
    Mlp(mlp::MlpModel),
    Gb(boost::BoostModel),
}

/// An immutable fitted model; prediction is thread-safe.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    spec: ClassifierSpec,
    feature_count: usize,
    class_count: usize,
    fitted: Fitted,
}

pub fn train(spec: &ClassifierSpec, d: &DataMatrix) -> Result<TrainedModel, ModelError> {
    spec.validate()?;
    if d.n_rows() == 0 {
        return Err(ModelError::EmptyTraining);
    }
    if d.class_counts().iter().filter(|&&c| c > 0).count() < 2 {
        return Err(ModelError::SingleClass);
    }

    let x = d.features();
    let y = d.labels();
    let k = d.n_classes();
    let fitted = match &spec.model {
        ModelConfig::Lr(p) => Fitted::Lr(logistic::fit(x, y, k, p)?),
        ModelConfig::Dt(p) => Fitted::Dt(tree::fit_classifier(x, y, k, p)),
        ModelConfig::Gnb(p) => Fitted::Gnb(bayes::fit(x, y, k, p)),
        ModelConfig::Rf(p) => Fitted::Rf(forest::fit(x, y, k, p, spec.seed)),
        ModelConfig::Mlp(p) => Fitted::Mlp(mlp::fit(x, y, k, p, spec.seed)?),
        ModelConfig::Gb(p) => Fitted::Gb(boost::fit(x, y, k, p)?),
    };
    Ok(TrainedModel {
        spec: spec.clone(),
        feature_count: d.n_features(),
        class_count: k,
        fitted,
    })
}

impl TrainedModel {
    pub fn spec(&self) -> &ClassifierSpec {
        &self.spec
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Class probabilities for one feature row.
    pub fn predict_proba_row(&self, row: ArrayView1<'_, f64>) -> Result<Vec<f64>, ModelError> {
        if row.len() != self.feature_count {
            return Err(ModelError::ColumnMismatch {
                expected: self.feature_count,
                got: row.len(),
            });
        }
        Ok(match &self.fitted {
            Fitted::Lr(m) => m.proba_row(row),
            Fitted::Dt(m) => m.proba_row(row),
            Fitted::Gnb(m) => m.proba_row(row),
            Fitted::Rf(m) => m.proba_row(row),
            Fitted::Mlp(m) => m.proba_row(row),
            Fitted::Gb(m) => m.proba_row(row),
        })
    }

    /// Row-per-sample probability matrix; every row sums to 1.
    pub fn predict_proba(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>, ModelError> {
        if x.ncols() != self.feature_count {
            return Err(ModelError::ColumnMismatch {
                expected: self.feature_count,
                got: x.ncols(),
            });
        }
        let mut out = Array2::zeros((x.nrows(), self.class_count));
        for (r, row) in x.rows().into_iter().enumerate() {
            let probs = self.predict_proba_row(row)?;
            for (c, p) in probs.into_iter().enumerate() {
                out[[r, c]] = p;
            }
        }
        Ok(out)
    }

    /// For a decision tree: the feature indices the fitted tree actually
    /// splits on. `None` for every other kind.
    pub fn split_features(&self) -> Option<Vec<usize>> {
        match &self.fitted {
            Fitted::Dt(t) => Some(t.split_features()),
            _ => None,
        }
    }

    /// Predicted class ids: argmax probability, ties to the lowest class id.
    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<usize>, ModelError> {
        if x.ncols() != self.feature_count {
            return Err(ModelError::ColumnMismatch {
                expected: self.feature_count,
                got: x.ncols(),
            });
        }
        x.rows()
            .into_iter()
            .map(|row| Ok(argmax_tie_lowest(&self.predict_proba_row(row)?)))
            .collect()
    }
}

/// Index of the largest value; ties resolve to the lowest index.
pub(crate) fn argmax_tie_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// In-place numerically stable softmax.
pub(crate) fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in z.iter_mut() {
        *v /= sum;
    }
}
