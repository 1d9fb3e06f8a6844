//! Permutation feature importance and the exhaustive subset search oracle.

use super::{ImportanceError, ImportanceVector, Method};
use crate::data::{DataMatrix, SplitPair};
use crate::models::{train, ClassifierSpec, TrainedModel};
use crate::rng;
use rayon::prelude::*;

/// Outcome of a subset search: the winning feature set and its holdout
/// accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSearchResult {
    pub best_subset: Vec<usize>,
    pub fitness: f64,
    pub evaluated: usize,
}

/// Drop in accuracy when each feature column is independently shuffled.
///
/// Raw score of feature `j` is `baseline - mean over repeats of permuted
/// accuracy`, computed in exact integer counts so a column whose shuffle
/// cannot change predictions (e.g. a constant) scores exactly 0.
pub fn permutation_importance(
    model: &TrainedModel,
    test: &DataMatrix,
    repeats: usize,
    seed: u64,
) -> Result<ImportanceVector, ImportanceError> {
    if repeats == 0 {
        return Err(ImportanceError::ZeroRepeats);
    }
    if test.n_rows() == 0 {
        return Err(ImportanceError::EmptyEval);
    }
    let n = test.n_rows();
    let p = test.n_features();
    let labels = test.labels();

    let baseline_correct = correct_count(model, test, labels)?;

    let per_feature: Vec<Result<u64, ImportanceError>> = (0..p)
        .into_par_iter()
        .map(|j| {
            let mut total_correct = 0u64;
            for r in 0..repeats {
                let mut stream =
                    rng::stream(seed, "pfi-permutation", (j * repeats + r) as u64);
                let mut column: Vec<f64> = test.features().column(j).to_vec();
                rng::shuffle(&mut column, &mut stream);
                let mut features = test.features().to_owned();
                for (row, v) in column.into_iter().enumerate() {
                    features[[row, j]] = v;
                }
                let predictions = model.predict(features.view())?;
                total_correct += predictions
                    .iter()
                    .zip(labels)
                    .filter(|(a, b)| a == b)
                    .count() as u64;
            }
            Ok(total_correct)
        })
        .collect();

    let mut raw = Vec::with_capacity(p);
    for totals in per_feature {
        let permuted_total = totals?;
        // baseline - mean(permuted) as one exact integer difference.
        let numerator = baseline_correct as i64 * repeats as i64 - permuted_total as i64;
        raw.push(numerator as f64 / (n as u64 * repeats as u64) as f64);
    }
    Ok(ImportanceVector::from_raw(
        Method::Pct,
        test.feature_names().to_vec(),
        raw,
    ))
}

fn correct_count(
    model: &TrainedModel,
    d: &DataMatrix,
    labels: &[usize],
) -> Result<u64, ImportanceError> {
    let predictions = model.predict(d.features())?;
    Ok(predictions
        .iter()
        .zip(labels)
        .filter(|(a, b)| a == b)
        .count() as u64)
}

/// Train and score every non-empty feature combination (there are `2^p - 1`)
/// and return the best by test accuracy. Ties prefer the smaller subset,
/// then lexicographic index order. Column order within a subset cannot
/// change any model's predictions, so each combination is evaluated once.
pub fn exhaustive_best_subset(
    spec: &ClassifierSpec,
    split: &SplitPair,
    max_features: usize,
) -> Result<SubsetSearchResult, ImportanceError> {
    let p = split.train.n_features();
    if p > max_features || p >= usize::BITS as usize {
        return Err(ImportanceError::SubsetCapExceeded {
            p,
            cap: max_features,
        });
    }
    let n_test = split.test.n_rows();
    if n_test == 0 {
        return Err(ImportanceError::EmptyEval);
    }

    let masks: Vec<usize> = (1..(1usize << p)).collect();
    let scored: Vec<(usize, u64)> = masks
        .par_iter()
        .map(|&mask| {
            let subset = mask_to_indices(mask, p);
            let train_sub = split.train.select_columns(&subset)?;
            let test_sub = split.test.select_columns(&subset)?;
            let model = train(spec, &train_sub)?;
            let correct = correct_count(&model, &test_sub, split.test.labels())?;
            Ok((mask, correct))
        })
        .collect::<Result<_, ImportanceError>>()?;

    // Candidate order: by subset size, then lexicographic on the index list;
    // a later candidate must be strictly better to win.
    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by_key(|&i| {
        let mask = scored[i].0;
        (mask.count_ones(), mask_to_indices(mask, p))
    });
    let mut best: Option<(usize, u64)> = None;
    for i in order {
        let (mask, correct) = scored[i];
        if best.is_none_or(|(_, c)| correct > c) {
            best = Some((mask, correct));
        }
    }
    let (mask, correct) = best.expect("at least one subset");
    Ok(SubsetSearchResult {
        best_subset: mask_to_indices(mask, p),
        fitness: correct as f64 / n_test as f64,
        evaluated: masks.len(),
    })
}

fn mask_to_indices(mask: usize, p: usize) -> Vec<usize> {
    (0..p).filter(|&j| mask & (1 << j) != 0).collect()
}
