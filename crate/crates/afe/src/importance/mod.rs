//! Feature-importance engines: permutation importance, exact Shapley
//! values, and the genetic subset search, all producing one vector type the
//! fusion stage can combine.

mod ga;
mod pfi;
mod shap;

pub use ga::{ga_evolve, ga_importance, ga_importance_best_mask, GaConfig, GaResult};
pub use pfi::{exhaustive_best_subset, permutation_importance, SubsetSearchResult};
pub use shap::{
    coalition_value, mean_abs_shap, shapley_exact, shapley_exact_direct, shapley_exact_fn,
    shapley_permutation_form, shapley_permutation_form_fn, BackgroundSet, BackgroundSource,
    ShapExplanation, EXACT_FEATURE_CAP, PERMUTATION_FEATURE_CAP,
};

use crate::data::DataError;
use crate::models::ModelError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImportanceError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("repeats must be >= 1")]
    ZeroRepeats,
    #[error("evaluation data is empty")]
    EmptyEval,
    #[error("{p} features exceed the exhaustive-search cap of {cap}")]
    SubsetCapExceeded { p: usize, cap: usize },
    #[error("{p} features exceed the cap of {cap} for {op}")]
    ShapCapExceeded {
        p: usize,
        cap: usize,
        op: &'static str,
    },
    #[error("feature index {index} outside 0..{p}")]
    FeatureOutOfRange { index: usize, p: usize },
    #[error("model produced a non-finite output during attribution")]
    NonFiniteOutput,
    #[error("background set must be non-empty")]
    EmptyBackground,
    #[error("genetic search needs at least 2 features, got {0}")]
    GaTooFewFeatures(usize),
    #[error("genetic search supports at most 64 features, got {0}")]
    GaTooManyFeatures(usize),
    #[error("invalid genetic-search configuration: {0}")]
    GaConfig(String),
    #[error("fitness holdout is degenerate (a class is missing) after {0} attempts")]
    GaDegenerateHoldout(usize),
}

/// Which engine produced an importance vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Pct,
    Shap,
    Ga,
    Afe,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Pct => "PCT",
            Method::Shap => "SHAP",
            Method::Ga => "GA",
            Method::Afe => "AFE",
        }
    }
}

/// Per-feature importance scores from one engine.
///
/// `raw_scores` are the engine's native numbers (may be negative); `scores`
/// clip negatives to zero and normalize to sum 1. If nothing is positive the
/// vector falls back to uniform `1/p` and says so.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportanceVector {
    pub method: Method,
    pub feature_names: Vec<String>,
    pub raw_scores: Vec<f64>,
    pub scores: Vec<f64>,
    pub uniform_fallback: bool,
}

impl ImportanceVector {
    pub fn from_raw(method: Method, feature_names: Vec<String>, raw_scores: Vec<f64>) -> Self {
        assert_eq!(
            feature_names.len(),
            raw_scores.len(),
            "names and scores must align"
        );
        let clipped: Vec<f64> = raw_scores.iter().map(|&s| s.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let p = raw_scores.len();
        let (scores, uniform_fallback) = if total > 0.0 {
            (clipped.iter().map(|&s| s / total).collect(), false)
        } else {
            (vec![1.0 / p as f64; p], true)
        };
        Self {
            method,
            feature_names,
            raw_scores,
            scores,
            uniform_fallback,
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Feature indices sorted by descending score; ties keep the original
    /// column order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.scores[b]
                .partial_cmp(&self.scores[a])
                .unwrap()
                .then(a.cmp(&b))
        });
        order
    }
}
