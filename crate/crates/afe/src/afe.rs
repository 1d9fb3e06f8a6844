//! The adaptive feature evaluator: run the three importance engines on one
//! split with one classifier, measure how well each engine's selection
//! performs, and fuse the three importance vectors with accuracy-derived
//! weights into a single ranking.
//!
//! Pipeline: stratified split -> standardize both sides with train statistics
//! -> train the baseline classifier on all features -> permutation
//! importance (test set), Shapley aggregation (train rows), and the genetic
//! search (internal holdout) in parallel -> median-select per method, retrain
//! and score on the test set -> accuracy weights -> convex fusion -> final
//! retrain on the fused selection.

use crate::data::{
    apply_standardize, fit_standardize, stratified_split, DataError, DataMatrix,
};
use crate::importance::{
    ga_evolve, ga_importance, ga_importance_best_mask, mean_abs_shap, permutation_importance,
    BackgroundSet, GaConfig, ImportanceError, ImportanceVector, Method,
};
use crate::metrics::{evaluate, MetricsError, MetricsReport};
use crate::models::{train, ClassifierSpec, Kind, ModelError, TrainedModel};
use crate::rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

fn default_split_ratio() -> f64 {
    0.7
}

fn default_pfi_repeats() -> usize {
    10
}

fn default_background_size() -> usize {
    64
}

fn default_shap_sample_cap() -> usize {
    128
}

/// Everything one evaluator run needs. Only `classifier` is mandatory in a
/// JSON config; every other field has a default.
///
/// The master `seed` derives a distinct sub-seed for each stochastic stage
/// (split, permutation repeats, background sampling, row sampling, genetic
/// search); `ga.seed` is therefore ignored by [`run_afe`] and only honored
/// when calling [`ga_evolve`] directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfeConfig {
    pub classifier: ClassifierSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_split_ratio")]
    pub split_ratio: f64,
    #[serde(default = "default_pfi_repeats")]
    pub pfi_repeats: usize,
    #[serde(default = "default_background_size")]
    pub background_size: usize,
    #[serde(default = "default_shap_sample_cap")]
    pub shap_sample_cap: usize,
    #[serde(default)]
    pub ga: GaConfig,
    /// Use the single best genetic mask (binary membership) instead of the
    /// default top-elite inclusion frequency.
    #[serde(default)]
    pub ga_binary_importance: bool,
}

impl AfeConfig {
    pub fn new(kind: Kind, seed: u64) -> Self {
        Self {
            classifier: ClassifierSpec::with_defaults(kind, seed),
            seed,
            split_ratio: default_split_ratio(),
            pfi_repeats: default_pfi_repeats(),
            background_size: default_background_size(),
            shap_sample_cap: default_shap_sample_cap(),
            ga: GaConfig::default(),
            ga_binary_importance: false,
        }
    }
}

/// Error from one named pipeline stage.
#[derive(Debug, Error)]
pub enum StageError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Importance(#[from] ImportanceError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Error)]
pub enum AfeError {
    #[error("{0} features are too few to rank (need at least 4 for median selection)")]
    TooFewFeatures(usize),
    #[error("all methods at zero accuracy")]
    ZeroTotalAccuracy,
    #[error("importance vectors have mismatched lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: StageError,
    },
}

fn at<T, E: Into<StageError>>(stage: &'static str, result: Result<T, E>) -> Result<T, AfeError> {
    result.map_err(|e| AfeError::Stage {
        stage,
        source: e.into(),
    })
}

/// One engine's selection and how a classifier retrained on it scored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodOutcome {
    pub method: Method,
    pub selected_indices: Vec<usize>,
    pub selected_features: Vec<String>,
    /// True when every score tied the median and selection fell back to all
    /// features.
    pub median_fallback: bool,
    pub accuracy: f64,
    pub f1: f64,
    pub metrics: MetricsReport,
}

/// Accuracy-derived fusion weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AfeWeights {
    #[serde(rename = "w_PCT")]
    pub pct: f64,
    #[serde(rename = "w_SHAP")]
    pub shap: f64,
    #[serde(rename = "w_GA")]
    pub ga: f64,
}

/// Seeds, data identity, and the configuration echo that make a report
/// self-describing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub master_seed: u64,
    pub split_seed: u64,
    pub pfi_seed: u64,
    pub background_seed: u64,
    pub shap_row_seed: u64,
    pub ga_seed: u64,
    pub dataset_digest: String,
    pub n_rows: usize,
    pub n_features: usize,
    pub n_classes: usize,
    pub config: AfeConfig,
}

/// Full outcome of one evaluator run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AfeReport {
    /// Engine outcomes in fixed order: PCT, SHAP, GA.
    pub per_method: Vec<MethodOutcome>,
    pub weights: AfeWeights,
    /// Fused importances, sorted by descending score (ties keep original
    /// column order).
    pub combined: ImportanceVector,
    pub afe_selected_indices: Vec<usize>,
    pub afe_selected_features: Vec<String>,
    pub afe_median_fallback: bool,
    /// Classifier retrained on the fused selection, scored on the test set.
    pub afe_metrics: MetricsReport,
    /// Classifier trained on all features, scored on the test set.
    pub baseline_metrics: MetricsReport,
    pub provenance: Provenance,
}

impl AfeReport {
    /// `(feature, weight)` pairs in ranking order, the shape of the ranking
    /// CSV.
    pub fn ranking_rows(&self) -> Vec<(String, f64)> {
        self.combined
            .feature_names
            .iter()
            .cloned()
            .zip(self.combined.scores.iter().copied())
            .collect()
    }
}

/// Indices whose score strictly exceeds the median score (even lengths use
/// the mean of the two central order statistics). If nothing clears the
/// median — all scores equal — every feature is kept and the flag is set.
pub fn median_select(v: &ImportanceVector) -> (Vec<usize>, bool) {
    assert!(!v.is_empty(), "cannot select from an empty vector");
    let mut sorted = v.scores.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let selected: Vec<usize> = (0..n).filter(|&j| v.scores[j] > median).collect();
    if selected.is_empty() {
        ((0..n).collect(), true)
    } else {
        (selected, false)
    }
}

/// Each method's weight is its accuracy divided by the total. Equal
/// accuracies short-circuit to the exact symmetric point so rounding in the
/// sum cannot perturb them.
pub fn compute_weights(
    acc_pct: f64,
    acc_shap: f64,
    acc_ga: f64,
) -> Result<AfeWeights, AfeError> {
    let total = acc_pct + acc_shap + acc_ga;
    if total <= 0.0 {
        return Err(AfeError::ZeroTotalAccuracy);
    }
    if acc_pct == acc_shap && acc_shap == acc_ga {
        let third = 1.0 / 3.0;
        return Ok(AfeWeights {
            pct: third,
            shap: third,
            ga: third,
        });
    }
    Ok(AfeWeights {
        pct: acc_pct / total,
        shap: acc_shap / total,
        ga: acc_ga / total,
    })
}

/// Convex combination of the three normalized score vectors.
///
/// The weighted sum is used as-is (no re-normalization), so each combined
/// score stays inside the per-feature min/max envelope of its inputs and the
/// total stays within float rounding of 1.
pub fn combine_importances(
    v_pct: &ImportanceVector,
    v_shap: &ImportanceVector,
    v_ga: &ImportanceVector,
    w: &AfeWeights,
) -> Result<ImportanceVector, AfeError> {
    let p = v_pct.len();
    for other in [v_shap.len(), v_ga.len()] {
        if other != p {
            return Err(AfeError::LengthMismatch(p, other));
        }
    }
    let scores: Vec<f64> = (0..p)
        .map(|j| w.pct * v_pct.scores[j] + w.shap * v_shap.scores[j] + w.ga * v_ga.scores[j])
        .collect();
    Ok(ImportanceVector {
        method: Method::Afe,
        feature_names: v_pct.feature_names.clone(),
        raw_scores: scores.clone(),
        scores,
        uniform_fallback: false,
    })
}

/// Reorder an importance vector by descending score, ties by original column
/// index.
fn sorted_descending(v: &ImportanceVector) -> ImportanceVector {
    let order = v.ranking();
    ImportanceVector {
        method: v.method,
        feature_names: order.iter().map(|&j| v.feature_names[j].clone()).collect(),
        raw_scores: order.iter().map(|&j| v.raw_scores[j]).collect(),
        scores: order.iter().map(|&j| v.scores[j]).collect(),
        uniform_fallback: v.uniform_fallback,
    }
}

fn score_selection(
    spec: &ClassifierSpec,
    train_data: &DataMatrix,
    test_data: &DataMatrix,
    selected: &[usize],
    stage: &'static str,
) -> Result<MetricsReport, AfeError> {
    let train_sub = at(stage, train_data.select_columns(selected))?;
    let test_sub = at(stage, test_data.select_columns(selected))?;
    let model: TrainedModel = at(stage, train(spec, &train_sub))?;
    let predictions = at(stage, model.predict(test_sub.features()))?;
    at(
        stage,
        evaluate(test_data.labels(), &predictions, test_data.n_classes()),
    )
}

/// Seeds derived from the master seed, one per stochastic stage.
struct StageSeeds {
    split: u64,
    pfi: u64,
    background: u64,
    shap_rows: u64,
    ga: u64,
}

impl StageSeeds {
    fn derive(master: u64) -> Self {
        Self {
            split: rng::derive_seed(master, "afe-split", 0),
            pfi: rng::derive_seed(master, "afe-pfi", 0),
            background: rng::derive_seed(master, "afe-background", 0),
            shap_rows: rng::derive_seed(master, "afe-shap-rows", 0),
            ga: rng::derive_seed(master, "afe-ga", 0),
        }
    }
}

fn provenance_for(cfg: &AfeConfig, d: &DataMatrix, seeds: &StageSeeds) -> Provenance {
    Provenance {
        master_seed: cfg.seed,
        split_seed: seeds.split,
        pfi_seed: seeds.pfi,
        background_seed: seeds.background,
        shap_row_seed: seeds.shap_rows,
        ga_seed: seeds.ga,
        dataset_digest: d.digest(),
        n_rows: d.n_rows(),
        n_features: d.n_features(),
        n_classes: d.n_classes(),
        config: cfg.clone(),
    }
}

/// Split, standardization, baseline fit, and the three engine vectors —
/// everything `run_afe` and `importance_vectors` share.
struct EngineStage {
    train_std: DataMatrix,
    test_std: DataMatrix,
    baseline_metrics: MetricsReport,
    v_pct: ImportanceVector,
    v_shap: ImportanceVector,
    v_ga: ImportanceVector,
    seeds: StageSeeds,
}

fn run_engines(cfg: &AfeConfig, d: &DataMatrix) -> Result<EngineStage, AfeError> {
    if d.n_features() < 4 {
        return Err(AfeError::TooFewFeatures(d.n_features()));
    }
    let seeds = StageSeeds::derive(cfg.seed);

    let split = at("split", stratified_split(d, cfg.split_ratio, seeds.split))?;
    let scaler = fit_standardize(&split.train);
    let train_std = at("standardize", apply_standardize(&split.train, &scaler))?;
    let test_std = at("standardize", apply_standardize(&split.test, &scaler))?;

    let model = at("baseline-train", train(&cfg.classifier, &train_std))?;
    let baseline_predictions = at("baseline-evaluate", model.predict(test_std.features()))?;
    let baseline_metrics = at(
        "baseline-evaluate",
        evaluate(test_std.labels(), &baseline_predictions, test_std.n_classes()),
    )?;

    // The three engines read the same split and model; run them as
    // independent tasks.
    let ga_cfg = GaConfig {
        seed: seeds.ga,
        ..cfg.ga.clone()
    };
    let (pfi_result, (shap_result, ga_outcome)) = rayon::join(
        || permutation_importance(&model, &test_std, cfg.pfi_repeats, seeds.pfi),
        || {
            rayon::join(
                || {
                    let bg = BackgroundSet::from_train(
                        &train_std,
                        cfg.background_size,
                        seeds.background,
                    )?;
                    mean_abs_shap(&model, &train_std, &bg, cfg.shap_sample_cap, seeds.shap_rows)
                },
                || ga_evolve(&cfg.classifier, &train_std, &ga_cfg),
            )
        },
    );
    let v_pct = at("permutation-importance", pfi_result)?;
    let v_shap = at("shap-importance", shap_result)?;
    let ga_result = at("ga-search", ga_outcome)?;
    let v_ga = if cfg.ga_binary_importance {
        ga_importance_best_mask(&ga_result)
    } else {
        ga_importance(&ga_result)
    };

    Ok(EngineStage {
        train_std,
        test_std,
        baseline_metrics,
        v_pct,
        v_shap,
        v_ga,
        seeds,
    })
}

/// The three engine vectors without the fusion tail — what `afe importance`
/// emits. Vectors arrive in PCT, SHAP, GA order and are exactly the ones a
/// [`run_afe`] call with the same config consumes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportanceBundle {
    pub vectors: Vec<ImportanceVector>,
    pub baseline_metrics: MetricsReport,
    pub provenance: Provenance,
}

/// Run the pipeline up through the three importance engines and stop before
/// selection, retraining, and fusion.
pub fn importance_vectors(cfg: &AfeConfig, d: &DataMatrix) -> Result<ImportanceBundle, AfeError> {
    let stage = run_engines(cfg, d)?;
    Ok(ImportanceBundle {
        provenance: provenance_for(cfg, d, &stage.seeds),
        baseline_metrics: stage.baseline_metrics,
        vectors: vec![stage.v_pct, stage.v_shap, stage.v_ga],
    })
}

/// Run the full evaluator on one dataset.
pub fn run_afe(cfg: &AfeConfig, d: &DataMatrix) -> Result<AfeReport, AfeError> {
    let EngineStage {
        train_std,
        test_std,
        baseline_metrics,
        v_pct,
        v_shap,
        v_ga,
        seeds,
    } = run_engines(cfg, d)?;

    let mut per_method = Vec::with_capacity(3);
    for (vector, stage) in [
        (&v_pct, "pct-retrain"),
        (&v_shap, "shap-retrain"),
        (&v_ga, "ga-retrain"),
    ] {
        let (selected, median_fallback) = median_select(vector);
        let metrics = score_selection(&cfg.classifier, &train_std, &test_std, &selected, stage)?;
        per_method.push(MethodOutcome {
            method: vector.method,
            selected_features: selected
                .iter()
                .map(|&j| d.feature_names()[j].clone())
                .collect(),
            selected_indices: selected,
            median_fallback,
            accuracy: metrics.accuracy,
            f1: metrics.f1,
            metrics,
        });
    }

    let weights = compute_weights(
        per_method[0].accuracy,
        per_method[1].accuracy,
        per_method[2].accuracy,
    )?;
    let combined_by_column = combine_importances(&v_pct, &v_shap, &v_ga, &weights)?;
    let (afe_selected, afe_median_fallback) = median_select(&combined_by_column);
    let afe_metrics = score_selection(
        &cfg.classifier,
        &train_std,
        &test_std,
        &afe_selected,
        "afe-retrain",
    )?;

    Ok(AfeReport {
        per_method,
        weights,
        combined: sorted_descending(&combined_by_column),
        afe_selected_features: afe_selected
            .iter()
            .map(|&j| d.feature_names()[j].clone())
            .collect(),
        afe_selected_indices: afe_selected,
        afe_median_fallback,
        afe_metrics,
        baseline_metrics,
        provenance: provenance_for(cfg, d, &seeds),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::synth_dataset;
    use crate::importance::Method;

    fn vector(method: Method, scores: Vec<f64>) -> ImportanceVector {
        let names = (0..scores.len()).map(|j| format!("f{j}")).collect();
        ImportanceVector {
            method,
            feature_names: names,
            raw_scores: scores.clone(),
            scores,
            uniform_fallback: false,
        }
    }

    #[test]
    fn median_selects_strictly_above() {
        let (sel, fallback) = median_select(&vector(Method::Pct, vec![0.4, 0.3, 0.2, 0.1]));
        assert_eq!(sel, vec![0, 1]);
        assert!(!fallback);

        let (sel, fallback) = median_select(&vector(Method::Pct, vec![0.5, 0.3, 0.2]));
        assert_eq!(sel, vec![0]);
        assert!(!fallback);
    }

    #[test]
    fn median_all_equal_falls_back_to_everything() {
        let (sel, fallback) = median_select(&vector(Method::Shap, vec![0.25; 4]));
        assert_eq!(sel, vec![0, 1, 2, 3]);
        assert!(fallback);
    }

    #[test]
    fn weights_are_accuracy_shares() {
        let w = compute_weights(0.8, 0.9, 0.7).unwrap();
        let total = 0.8 + 0.9 + 0.7;
        assert_eq!(w.pct, 0.8 / total);
        assert!((w.pct - 1.0 / 3.0).abs() < 1e-9);
        assert!((w.shap - 0.375).abs() < 1e-12);
        assert!((w.ga - 0.7 / 2.4).abs() < 1e-9);
        assert!((w.pct + w.shap + w.ga - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_accuracies_give_exact_thirds() {
        for a in [0.1, 0.5, 0.73, 1.0] {
            let w = compute_weights(a, a, a).unwrap();
            assert_eq!(w.pct, 1.0 / 3.0);
            assert_eq!(w.shap, 1.0 / 3.0);
            assert_eq!(w.ga, 1.0 / 3.0);
        }
    }

    #[test]
    fn degenerate_mass_and_zero_total() {
        let w = compute_weights(1.0, 0.0, 0.0).unwrap();
        assert_eq!((w.pct, w.shap, w.ga), (1.0, 0.0, 0.0));

        let err = compute_weights(0.0, 0.0, 0.0).unwrap_err();
        assert_eq!(err.to_string(), "all methods at zero accuracy");
    }

    #[test]
    fn combine_matches_hand_arithmetic() {
        let w = AfeWeights {
            pct: 0.5,
            shap: 0.3,
            ga: 0.2,
        };
        let combined = combine_importances(
            &vector(Method::Pct, vec![1.0, 0.0]),
            &vector(Method::Shap, vec![0.0, 1.0]),
            &vector(Method::Ga, vec![0.5, 0.5]),
            &w,
        )
        .unwrap();
        assert!((combined.scores[0] - 0.6).abs() < 1e-12);
        assert!((combined.scores[1] - 0.4).abs() < 1e-12);
        assert_eq!(combined.method, Method::Afe);
        assert!((combined.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identical_inputs_are_a_fixed_point() {
        let scores = vec![0.4, 0.3, 0.2, 0.1];
        let w = AfeWeights {
            pct: 0.7,
            shap: 0.2,
            ga: 0.1,
        };
        let combined = combine_importances(
            &vector(Method::Pct, scores.clone()),
            &vector(Method::Shap, scores.clone()),
            &vector(Method::Ga, scores.clone()),
            &w,
        )
        .unwrap();
        for (got, want) in combined.scores.iter().zip(&scores) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(combined.ranking(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn combined_stays_in_the_envelope() {
        let v1 = vector(Method::Pct, vec![0.7, 0.1, 0.2]);
        let v2 = vector(Method::Shap, vec![0.2, 0.5, 0.3]);
        let v3 = vector(Method::Ga, vec![0.1, 0.8, 0.1]);
        let w = compute_weights(0.9, 0.6, 0.3).unwrap();
        let combined = combine_importances(&v1, &v2, &v3, &w).unwrap();
        for j in 0..3 {
            let lo = v1.scores[j].min(v2.scores[j]).min(v3.scores[j]);
            let hi = v1.scores[j].max(v2.scores[j]).max(v3.scores[j]);
            assert!(combined.scores[j] >= lo - 1e-12 && combined.scores[j] <= hi + 1e-12);
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let w = compute_weights(0.5, 0.5, 0.6).unwrap();
        let err = combine_importances(
            &vector(Method::Pct, vec![0.5, 0.5]),
            &vector(Method::Shap, vec![1.0]),
            &vector(Method::Ga, vec![0.5, 0.5]),
            &w,
        )
        .unwrap_err();
        assert!(matches!(err, AfeError::LengthMismatch(2, 1)));
    }

    #[test]
    fn scaling_raw_scores_keeps_the_ranking() {
        let raw = vec![0.03, 0.4, 0.11, 0.0, 0.2];
        let names: Vec<String> = (0..5).map(|j| format!("f{j}")).collect();
        let base = ImportanceVector::from_raw(Method::Pct, names.clone(), raw.clone());
        let scaled = ImportanceVector::from_raw(
            Method::Pct,
            names,
            raw.iter().map(|s| s * 3.7).collect(),
        );
        assert_eq!(base.ranking(), scaled.ranking());
        let w = AfeWeights {
            pct: 0.4,
            shap: 0.35,
            ga: 0.25,
        };
        let c1 = combine_importances(&base, &base, &base, &w).unwrap();
        let c2 = combine_importances(&scaled, &scaled, &scaled, &w).unwrap();
        assert_eq!(c1.ranking(), c2.ranking());
    }

    #[test]
    fn too_few_features_are_rejected() {
        let d = synth_dataset(60, 1, 2, 0);
        let cfg = AfeConfig::new(Kind::Dt, 0);
        assert!(matches!(
            run_afe(&cfg, &d).unwrap_err(),
            AfeError::TooFewFeatures(3)
        ));
    }

    #[test]
    fn bad_split_ratio_names_the_stage() {
        let d = synth_dataset(60, 2, 2, 0);
        let cfg = AfeConfig {
            split_ratio: 1.5,
            ..AfeConfig::new(Kind::Dt, 0)
        };
        let err = run_afe(&cfg, &d).unwrap_err();
        assert!(err.to_string().starts_with("stage split:"), "{err}");
    }

    #[test]
    fn full_run_recovers_planted_features() {
        let d = synth_dataset(300, 2, 6, 0);
        let cfg = AfeConfig::new(Kind::Dt, 0);
        let report = run_afe(&cfg, &d).unwrap();

        // Fusion algebra invariants.
        let w = report.weights;
        assert!((w.pct + w.shap + w.ga - 1.0).abs() < 1e-12);
        assert!((report.combined.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert_eq!(report.per_method.len(), 3);
        assert_eq!(
            report.per_method.iter().map(|m| m.method).collect::<Vec<_>>(),
            vec![Method::Pct, Method::Shap, Method::Ga]
        );

        // The sorted combined ranking is a permutation of all features.
        let mut names = report.combined.feature_names.clone();
        names.sort();
        let mut all = d.feature_names().to_vec();
        all.sort();
        assert_eq!(names, all);

        // Both planted features rank in the top three.
        let top3 = &report.combined.feature_names[..3];
        assert!(
            top3.contains(&"f0".to_string()) && top3.contains(&"f1".to_string()),
            "top3 {top3:?}"
        );
    }

    #[test]
    fn runs_are_deterministic() {
        let d = synth_dataset(200, 2, 4, 3);
        let cfg = AfeConfig::new(Kind::Gnb, 7);
        let a = run_afe(&cfg, &d).unwrap();
        let b = run_afe(&cfg, &d).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn importance_bundle_matches_full_run() {
        let d = synth_dataset(200, 2, 4, 3);
        let cfg = AfeConfig::new(Kind::Dt, 11);
        let bundle = importance_vectors(&cfg, &d).unwrap();
        let report = run_afe(&cfg, &d).unwrap();

        // Same engines, same seeds: the bundle's vectors drive exactly the
        // per-method selections the full run reports.
        assert_eq!(bundle.vectors.len(), 3);
        for (vector, outcome) in bundle.vectors.iter().zip(&report.per_method) {
            assert_eq!(vector.method, outcome.method);
            let (selected, fallback) = median_select(vector);
            assert_eq!(selected, outcome.selected_indices);
            assert_eq!(fallback, outcome.median_fallback);
        }
        assert_eq!(bundle.baseline_metrics, report.baseline_metrics);
        assert_eq!(bundle.provenance, report.provenance);
        assert_eq!(bundle, importance_vectors(&cfg, &d).unwrap());
    }

    #[test]
    fn config_json_fills_defaults() {
        let cfg: AfeConfig =
            serde_json::from_str(r#"{"classifier": {"kind": "rf"}, "seed": 5}"#).unwrap();
        assert_eq!(cfg.classifier.kind(), Kind::Rf);
        assert_eq!(cfg.split_ratio, 0.7);
        assert_eq!(cfg.pfi_repeats, 10);
        assert_eq!(cfg.background_size, 64);
        assert_eq!(cfg.shap_sample_cap, 128);
        assert_eq!(cfg.ga.population, 30);
        assert!(!cfg.ga_binary_importance);

        let round: AfeConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(round, cfg);
    }
}
