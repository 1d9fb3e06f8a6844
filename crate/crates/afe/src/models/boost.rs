//! Gradient boosting on log-loss: stagewise Friedman-MSE regression trees
//! over probability residuals, with Newton-step leaf values.
//!
//! Binary tasks boost a single logit per stage; K-class tasks boost one tree
//! per class per stage. Scores start at the training log-odds / log-priors.

use super::{softmax_in_place, tree, GbParams, ModelError, RegTree};
use ndarray::{Array2, ArrayView1, ArrayView2};

#[derive(Debug, Clone)]
pub(crate) struct BoostModel {
    /// Initial per-class scores (log-odds for binary, log-priors otherwise).
    init_scores: Vec<f64>,
    /// One tree per stage for binary (applied to class 1's score), K trees
    /// per stage for multiclass.
    stages: Vec<Vec<RegTree>>,
    lr: f64,
    n_classes: usize,
    /// Training log-loss after initialization and after each stage. The
    /// loss pass doubles as the residual-probability computation, so it is
    /// free to keep; tests assert the curve is monotone non-increasing.
    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) train_losses: Vec<f64>,
}

pub(crate) fn fit(
    x: ArrayView2<'_, f64>,
    y: &[usize],
    n_classes: usize,
    params: &GbParams,
) -> Result<BoostModel, ModelError> {
    let n = x.nrows();
    let binary = n_classes == 2;

    let mut counts = vec![0usize; n_classes];
    for &label in y {
        counts[label] += 1;
    }
    let init_scores: Vec<f64> = if binary {
        let p1 = counts[1] as f64 / n as f64;
        vec![0.0, (p1 / (1.0 - p1)).ln()]
    } else {
        counts
            .iter()
            .map(|&c| ((c.max(1)) as f64 / n as f64).ln())
            .collect()
    };

    // Per-row class scores, updated stage by stage.
    let mut scores = Array2::from_shape_fn((n, n_classes), |(_, c)| init_scores[c]);
    let mut probs = Array2::zeros((n, n_classes));
    let mut buf = vec![0.0; n_classes];
    let mut log_loss = |scores: &Array2<f64>, probs: &mut Array2<f64>| -> f64 {
        let mut total = 0.0;
        for r in 0..n {
            buf.copy_from_slice(scores.row(r).as_slice().expect("row-major"));
            softmax_in_place(&mut buf);
            for (c, &p) in buf.iter().enumerate() {
                probs[[r, c]] = p;
            }
            total -= buf[y[r]].max(1e-300).ln();
        }
        total / n as f64
    };

    let mut train_losses = vec![log_loss(&scores, &mut probs)];
    let mut stages = Vec::with_capacity(params.n_stages);
    let all_rows: Vec<usize> = (0..n).collect();
    let mut residuals = vec![0.0; n];
    let mut hessians = vec![0.0; n];
    for _ in 0..params.n_stages {
        let classes_to_boost: &[usize] = if binary { &[1] } else { &all_classes(n_classes) };
        let mut stage = Vec::with_capacity(classes_to_boost.len());
        for &class in classes_to_boost {
            for r in 0..n {
                let p = probs[[r, class]];
                residuals[r] = f64::from(y[r] == class) - p;
                hessians[r] = p * (1.0 - p);
            }
            let t = tree::grow_regression(
                x,
                &residuals,
                &hessians,
                all_rows.clone(),
                params.max_depth,
                params.min_samples_split,
            );
            for r in 0..n {
                scores[[r, class]] += params.lr * t.value_row(x.row(r));
            }
            stage.push(t);
        }
        stages.push(stage);
        let loss = log_loss(&scores, &mut probs);
        if !loss.is_finite() {
            return Err(ModelError::NonFinite);
        }
        train_losses.push(loss);
    }

    Ok(BoostModel {
        init_scores,
        stages,
        lr: params.lr,
        n_classes,
        train_losses,
    })
}

fn all_classes(k: usize) -> Vec<usize> {
    (0..k).collect()
}

impl BoostModel {
    pub(crate) fn proba_row(&self, row: ArrayView1<'_, f64>) -> Vec<f64> {
        let mut scores = self.init_scores.clone();
        for stage in &self.stages {
            if self.n_classes == 2 {
                scores[1] += self.lr * stage[0].value_row(row);
            } else {
                for (class, t) in stage.iter().enumerate() {
                    scores[class] += self.lr * t.value_row(row);
                }
            }
        }
        softmax_in_place(&mut scores);
        scores
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn binary_fixture() -> (Array2<f64>, Vec<usize>) {
        let x = array![
            [0.0, 1.0],
            [0.4, 0.2],
            [1.0, 0.8],
            [1.3, 1.1],
            [5.0, 0.3],
            [5.5, 1.2],
            [6.0, 0.1],
            [6.2, 0.9]
        ];
        (x, vec![0, 0, 0, 0, 1, 1, 1, 1])
    }

    #[test]
    fn fits_binary_fixture_perfectly() {
        let (x, y) = binary_fixture();
        let m = fit(x.view(), &y, 2, &GbParams::default()).unwrap();
        for (r, &label) in y.iter().enumerate() {
            let probs = m.proba_row(x.row(r));
            assert_eq!(super::super::argmax_tie_lowest(&probs), label);
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn training_loss_is_non_increasing_across_stages() {
        let (x, y) = binary_fixture();
        let m = fit(x.view(), &y, 2, &GbParams::default()).unwrap();
        assert_eq!(m.train_losses.len(), GbParams::default().n_stages + 1);
        for pair in m.train_losses.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "loss rose: {pair:?}");
        }
    }

    #[test]
    fn initial_score_is_the_log_odds() {
        let x = array![[0.0], [1.0], [2.0], [3.0]];
        let y = vec![0, 1, 1, 1];
        let m = fit(x.view(), &y, 2, &GbParams { n_stages: 1, ..GbParams::default() }).unwrap();
        assert!((m.init_scores[1] - (0.75f64 / 0.25).ln()).abs() < 1e-12);
        // Loss at stage 0 is the entropy of the prior.
        let prior_loss = -(0.25f64.ln() * 0.25 + 0.75f64.ln() * 0.75);
        assert!((m.train_losses[0] - prior_loss).abs() < 1e-12);
    }

    #[test]
    fn three_class_fixture_trains_and_normalizes() {
        let x = array![
            [0.0],
            [0.5],
            [1.0],
            [5.0],
            [5.5],
            [6.0],
            [10.0],
            [10.5],
            [11.0]
        ];
        let y = vec![0, 0, 0, 1, 1, 1, 2, 2, 2];
        let m = fit(x.view(), &y, 3, &GbParams::default()).unwrap();
        for (r, &label) in y.iter().enumerate() {
            let probs = m.proba_row(x.row(r));
            assert_eq!(super::super::argmax_tie_lowest(&probs), label);
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        for pair in m.train_losses.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12);
        }
    }
}
