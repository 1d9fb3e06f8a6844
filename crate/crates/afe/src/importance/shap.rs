//! Exact interventional Shapley attribution.
//!
//! Two equivalent formulations are provided: the subset enumeration with
//! combinatorial weights `1 / (p * C(p-1, |S|))`, and the average marginal
//! contribution over all `p!` feature orderings. Coalition values replace
//! absent features with background rows and average the model output, so the
//! attribution explains the gap between the model's prediction and its
//! background expectation.

use super::{ImportanceError, ImportanceVector, Method};
use crate::data::DataMatrix;
use crate::models::{argmax_tie_lowest, ModelError, TrainedModel};
use crate::rng;
use itertools::Itertools;
use ndarray::{Array2, ArrayView1, ArrayView2};
use rayon::prelude::*;
use serde::Serialize;

/// Hard cap for the subset-enumeration formulation (`2^p` coalitions).
pub const EXACT_FEATURE_CAP: usize = 20;
/// Hard cap for the ordering-average formulation (`p!` orderings).
pub const PERMUTATION_FEATURE_CAP: usize = 10;

/// Where a background set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackgroundSource {
    TrainSample,
    UserSupplied,
}

/// Reference rows standing in for "feature absent" when coalition values are
/// evaluated.
#[derive(Debug, Clone)]
pub struct BackgroundSet {
    rows: Array2<f64>,
    source: BackgroundSource,
}

impl BackgroundSet {
    /// Seeded sample of up to `cap` training rows (all of them when the
    /// training set is small enough), kept in source order.
    pub fn from_train(train: &DataMatrix, cap: usize, seed: u64) -> Result<Self, ImportanceError> {
        if train.n_rows() == 0 || cap == 0 {
            return Err(ImportanceError::EmptyBackground);
        }
        let rows = if train.n_rows() <= cap {
            train.features().to_owned()
        } else {
            let mut picked =
                rng::sample_indices(train.n_rows(), cap, &mut rng::stream(seed, "shap-background", 0));
            picked.sort_unstable();
            train.select_rows(&picked)?.features().to_owned()
        };
        Ok(Self {
            rows,
            source: BackgroundSource::TrainSample,
        })
    }

    pub fn from_rows(rows: Array2<f64>) -> Result<Self, ImportanceError> {
        if rows.nrows() == 0 {
            return Err(ImportanceError::EmptyBackground);
        }
        Ok(Self {
            rows,
            source: BackgroundSource::UserSupplied,
        })
    }

    pub fn rows(&self) -> ArrayView2<'_, f64> {
        self.rows.view()
    }

    pub fn source(&self) -> BackgroundSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.rows.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.nrows() == 0
    }
}

/// Attribution of one prediction across features.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapExplanation {
    pub instance_index: usize,
    /// Coalition value of the empty set: mean model output over background rows.
    pub base_value: f64,
    /// Coalition value of the full set: the model output at the instance.
    pub fx_full: f64,
    pub phi: Vec<f64>,
}

/// Compensated (Kahan) accumulator used wherever many small attribution terms
/// are summed, keeping the two formulations in tight numeric agreement.
#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Exact binomial coefficient (multiplicative form stays in integers).
fn binomial(n: usize, k: usize) -> u64 {
    let mut r: u128 = 1;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

/// Weight of a coalition of size `s` (excluding the explained feature):
/// `1 / (p * C(p-1, s))`.
fn subset_weights(p: usize) -> Vec<f64> {
    (0..p)
        .map(|s| 1.0 / (p as f64 * binomial(p - 1, s) as f64))
        .collect()
}

fn fill_hybrid(x: &[f64], b: &[f64], mask: usize, out: &mut [f64]) {
    for j in 0..x.len() {
        out[j] = if mask & (1 << j) != 0 { x[j] } else { b[j] };
    }
}

/// Coalition table `v[mask] = mean over background rows of f(hybrid)`,
/// evaluating the model only on the hybrids that are actually distinct.
///
/// For each background row only the features that differ from the instance
/// (`d_mask`) can change the hybrid, so the model is called once per submask
/// of `d_mask` and every coalition reads `scratch[mask & d_mask]`. The
/// accumulation visits background rows in source order for every mask, which
/// is the same addition sequence as [`coalition_table_direct`] — the two
/// tables are identical bit for bit.
fn coalition_table_cached<F>(f: &F, x: &[f64], bg: &Array2<f64>) -> Result<Vec<f64>, ImportanceError>
where
    F: Fn(&[f64]) -> Result<f64, ImportanceError>,
{
    let p = x.len();
    let size = 1usize << p;
    let mut v = vec![0.0f64; size];
    let mut scratch = vec![0.0f64; size];
    let mut hybrid = vec![0.0f64; p];
    for row in bg.outer_iter() {
        let b = row.to_vec();
        let mut d_mask = 0usize;
        for j in 0..p {
            if x[j] != b[j] {
                d_mask |= 1 << j;
            }
        }
        let mut t = d_mask;
        loop {
            fill_hybrid(x, &b, t, &mut hybrid);
            scratch[t] = f(&hybrid)?;
            if t == 0 {
                break;
            }
            t = (t - 1) & d_mask;
        }
        for (mask, slot) in v.iter_mut().enumerate() {
            *slot += scratch[mask & d_mask];
        }
    }
    let n = bg.nrows() as f64;
    for slot in &mut v {
        *slot /= n;
    }
    Ok(v)
}

/// Reference coalition table with no memoization: every (mask, background
/// row) pair gets its own model call.
fn coalition_table_direct<F>(f: &F, x: &[f64], bg: &Array2<f64>) -> Result<Vec<f64>, ImportanceError>
where
    F: Fn(&[f64]) -> Result<f64, ImportanceError>,
{
    let p = x.len();
    let size = 1usize << p;
    let mut v = vec![0.0f64; size];
    let mut hybrid = vec![0.0f64; p];
    for (mask, slot) in v.iter_mut().enumerate() {
        for row in bg.outer_iter() {
            let b = row.to_vec();
            fill_hybrid(x, &b, mask, &mut hybrid);
            *slot += f(&hybrid)?;
        }
        *slot /= bg.nrows() as f64;
    }
    Ok(v)
}

/// Subset-enumeration attribution from a coalition table.
fn phi_from_subsets(v: &[f64], p: usize) -> Vec<f64> {
    let w = subset_weights(p);
    (0..p)
        .map(|i| {
            let bit = 1usize << i;
            let mut acc = Kahan::default();
            for mask in 0..v.len() {
                if mask & bit == 0 {
                    acc.add(w[mask.count_ones() as usize] * (v[mask | bit] - v[mask]));
                }
            }
            acc.sum
        })
        .collect()
}

/// Ordering-average attribution from a coalition table: each feature's mean
/// marginal gain when it joins its predecessors, over all `p!` orderings.
fn phi_from_orderings(v: &[f64], p: usize) -> Vec<f64> {
    let mut acc: Vec<Kahan> = vec![Kahan::default(); p];
    for ordering in (0..p).permutations(p) {
        let mut mask = 0usize;
        for &i in &ordering {
            let bit = 1usize << i;
            acc[i].add(v[mask | bit] - v[mask]);
            mask |= bit;
        }
    }
    let orderings: f64 = (1..=p).map(|i| i as f64).product();
    acc.into_iter().map(|k| k.sum / orderings).collect()
}

/// The scalar being attributed: class-1 probability for binary models, the
/// predicted class's probability otherwise (the class is fixed from the full
/// instance before any feature is replaced).
fn explained_class(model: &TrainedModel, x: &[f64]) -> Result<usize, ImportanceError> {
    if model.class_count() == 2 {
        return Ok(1);
    }
    let proba = model.predict_proba_row(ArrayView1::from(x))?;
    Ok(argmax_tie_lowest(&proba))
}

fn model_scalar<'a>(
    model: &'a TrainedModel,
    class: usize,
) -> impl Fn(&[f64]) -> Result<f64, ImportanceError> + 'a {
    move |row: &[f64]| {
        let proba = model.predict_proba_row(ArrayView1::from(row))?;
        let value = proba[class];
        if !value.is_finite() {
            return Err(ImportanceError::NonFiniteOutput);
        }
        Ok(value)
    }
}

fn check_shapes(
    model: &TrainedModel,
    x: &[f64],
    bg: &BackgroundSet,
) -> Result<(), ImportanceError> {
    if x.len() != model.feature_count() {
        return Err(ModelError::ColumnMismatch {
            expected: model.feature_count(),
            got: x.len(),
        }
        .into());
    }
    if bg.rows.ncols() != x.len() {
        return Err(ModelError::ColumnMismatch {
            expected: x.len(),
            got: bg.rows.ncols(),
        }
        .into());
    }
    Ok(())
}

/// Mean model output over background rows with the coalition's features taken
/// from `x` and all others taken from each background row. With all features
/// in the coalition this is the model output at `x` itself.
pub fn coalition_value(
    model: &TrainedModel,
    x: ArrayView1<'_, f64>,
    coalition: &[usize],
    bg: &BackgroundSet,
) -> Result<f64, ImportanceError> {
    let xv: Vec<f64> = x.iter().copied().collect();
    check_shapes(model, &xv, bg)?;
    let p = xv.len();
    let mut mask = 0usize;
    for &index in coalition {
        if index >= p {
            return Err(ImportanceError::FeatureOutOfRange { index, p });
        }
        mask |= 1 << index;
    }
    let class = explained_class(model, &xv)?;
    let f = model_scalar(model, class);
    let mut hybrid = vec![0.0f64; p];
    let mut total = 0.0f64;
    for row in bg.rows.outer_iter() {
        let b = row.to_vec();
        fill_hybrid(&xv, &b, mask, &mut hybrid);
        total += f(&hybrid)?;
    }
    Ok(total / bg.rows.nrows() as f64)
}

fn explain_fn<F>(
    f: &F,
    xv: &[f64],
    bg: &BackgroundSet,
    cap: usize,
    op: &'static str,
    use_cache: bool,
    by_orderings: bool,
) -> Result<ShapExplanation, ImportanceError>
where
    F: Fn(&[f64]) -> Result<f64, ImportanceError>,
{
    let p = xv.len();
    if bg.rows.ncols() != p {
        return Err(ModelError::ColumnMismatch {
            expected: p,
            got: bg.rows.ncols(),
        }
        .into());
    }
    if p > cap {
        return Err(ImportanceError::ShapCapExceeded { p, cap, op });
    }
    let v = if use_cache {
        coalition_table_cached(f, xv, &bg.rows)?
    } else {
        coalition_table_direct(f, xv, &bg.rows)?
    };
    let phi = if by_orderings {
        phi_from_orderings(&v, p)
    } else {
        phi_from_subsets(&v, p)
    };
    Ok(ShapExplanation {
        instance_index: 0,
        base_value: v[0],
        fx_full: v[v.len() - 1],
        phi,
    })
}

fn explain(
    model: &TrainedModel,
    x: ArrayView1<'_, f64>,
    bg: &BackgroundSet,
    cap: usize,
    op: &'static str,
    use_cache: bool,
    by_orderings: bool,
) -> Result<ShapExplanation, ImportanceError> {
    let xv: Vec<f64> = x.iter().copied().collect();
    check_shapes(model, &xv, bg)?;
    let class = explained_class(model, &xv)?;
    let f = model_scalar(model, class);
    explain_fn(&f, &xv, bg, cap, op, use_cache, by_orderings)
}

/// Exact attribution by subset enumeration (at most [`EXACT_FEATURE_CAP`]
/// features). Coalition values are computed once per distinct hybrid and
/// cached.
pub fn shapley_exact(
    model: &TrainedModel,
    x: ArrayView1<'_, f64>,
    bg: &BackgroundSet,
) -> Result<ShapExplanation, ImportanceError> {
    explain(model, x, bg, EXACT_FEATURE_CAP, "exact attribution", true, false)
}

/// Same result as [`shapley_exact`] with the coalition cache disabled; exists
/// so the memoization can be checked bit for bit.
pub fn shapley_exact_direct(
    model: &TrainedModel,
    x: ArrayView1<'_, f64>,
    bg: &BackgroundSet,
) -> Result<ShapExplanation, ImportanceError> {
    explain(model, x, bg, EXACT_FEATURE_CAP, "exact attribution", false, false)
}

/// Attribution as the average marginal contribution over all `p!` feature
/// orderings (at most [`PERMUTATION_FEATURE_CAP`] features). Agrees with
/// [`shapley_exact`] to near machine precision.
pub fn shapley_permutation_form(
    model: &TrainedModel,
    x: ArrayView1<'_, f64>,
    bg: &BackgroundSet,
) -> Result<ShapExplanation, ImportanceError> {
    explain(
        model,
        x,
        bg,
        PERMUTATION_FEATURE_CAP,
        "ordering-average attribution",
        true,
        true,
    )
}

/// [`shapley_exact`] for an arbitrary scalar engine instead of a trained
/// model: same subset enumeration, weights, and caching. This is the hook
/// for closed-form oracles (linear or additive functions, cooperative-game
/// payoffs with presence encoded via instance-vs-background values) and for
/// attributing models not trained by this crate.
pub fn shapley_exact_fn<F>(
    engine: F,
    x: &[f64],
    bg: &BackgroundSet,
) -> Result<ShapExplanation, ImportanceError>
where
    F: Fn(&[f64]) -> Result<f64, ImportanceError>,
{
    explain_fn(&engine, x, bg, EXACT_FEATURE_CAP, "exact attribution", true, false)
}

/// [`shapley_permutation_form`] for an arbitrary scalar engine.
pub fn shapley_permutation_form_fn<F>(
    engine: F,
    x: &[f64],
    bg: &BackgroundSet,
) -> Result<ShapExplanation, ImportanceError>
where
    F: Fn(&[f64]) -> Result<f64, ImportanceError>,
{
    explain_fn(
        &engine,
        x,
        bg,
        PERMUTATION_FEATURE_CAP,
        "ordering-average attribution",
        true,
        true,
    )
}

/// Dataset-level importance: mean `|phi_j|` over up to `sample_cap`
/// seeded-sampled evaluation rows, normalized to sum 1.
pub fn mean_abs_shap(
    model: &TrainedModel,
    eval: &DataMatrix,
    bg: &BackgroundSet,
    sample_cap: usize,
    seed: u64,
) -> Result<ImportanceVector, ImportanceError> {
    if eval.n_rows() == 0 || sample_cap == 0 {
        return Err(ImportanceError::EmptyEval);
    }
    let rows: Vec<usize> = if eval.n_rows() <= sample_cap {
        (0..eval.n_rows()).collect()
    } else {
        let mut picked =
            rng::sample_indices(eval.n_rows(), sample_cap, &mut rng::stream(seed, "shap-rows", 0));
        picked.sort_unstable();
        picked
    };
    let explanations: Vec<ShapExplanation> = rows
        .par_iter()
        .map(|&r| {
            let mut e = shapley_exact(model, eval.features().row(r), bg)?;
            e.instance_index = r;
            Ok(e)
        })
        .collect::<Result<_, ImportanceError>>()?;
    let p = eval.n_features();
    let mut raw = vec![0.0f64; p];
    for e in &explanations {
        for j in 0..p {
            raw[j] += e.phi[j].abs();
        }
    }
    for slot in &mut raw {
        *slot /= explanations.len() as f64;
    }
    Ok(ImportanceVector::from_raw(
        Method::Shap,
        eval.feature_names().to_vec(),
        raw,
    ))
}
