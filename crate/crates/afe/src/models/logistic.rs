//! Multinomial logistic regression trained by full-batch gradient descent
//! with Armijo backtracking line search.
//!
//! Objective: mean cross-entropy plus `l2 / (2n) * ||W||^2` (bias columns
//! unpenalized). Weights start at zero, so the untrained model maps every
//! row to the uniform distribution.

use super::{softmax_in_place, LrParams, ModelError};
use ndarray::{Array2, ArrayView1, ArrayView2};

#[derive(Debug, Clone)]
pub(crate) struct LrModel {
    /// `p x k` weight matrix.
    pub(crate) weights: Array2<f64>,
    /// Per-class bias.
    pub(crate) bias: Vec<f64>,
}

pub(crate) fn fit(
    x: ArrayView2<'_, f64>,
    y: &[usize],
    n_classes: usize,
    params: &LrParams,
) -> Result<LrModel, ModelError> {
    let p = x.ncols();
    let mut model = LrModel {
        weights: Array2::zeros((p, n_classes)),
        bias: vec![0.0; n_classes],
    };

    let mut loss = objective(&model, x, y, params.l2);
    for _ in 0..params.max_iters {
        let (grad_w, grad_b) = gradients(&model, x, y, params.l2);
        let grad_norm_sq: f64 =
            grad_w.iter().map(|g| g * g).sum::<f64>() + grad_b.iter().map(|g| g * g).sum::<f64>();
        if grad_norm_sq.sqrt() < params.tol {
            break;
        }

        // Armijo backtracking from a unit step.
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial = step_model(&model, &grad_w, &grad_b, step);
            let trial_loss = objective(&trial, x, y, params.l2);
            if trial_loss <= loss - 1e-4 * step * grad_norm_sq {
                model = trial;
                loss = trial_loss;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break; // no descent step representable; already at numerical optimum
        }
        if !loss.is_finite() {
            return Err(ModelError::NonFinite);
        }
    }
    Ok(model)
}

fn step_model(m: &LrModel, grad_w: &Array2<f64>, grad_b: &[f64], step: f64) -> LrModel {
    let mut out = m.clone();
    out.weights.zip_mut_with(grad_w, |w, g| *w -= step * g);
    for (b, g) in out.bias.iter_mut().zip(grad_b) {
        *b -= step * g;
    }
    out
}

fn objective(m: &LrModel, x: ArrayView2<'_, f64>, y: &[usize], l2: f64) -> f64 {
    let n = x.nrows() as f64;
    let mut total = 0.0;
    for (r, row) in x.rows().into_iter().enumerate() {
        let probs = m.proba_row(row);
        total -= probs[y[r]].max(1e-300).ln();
    }
    let penalty: f64 = m.weights.iter().map(|w| w * w).sum();
    total / n + l2 / (2.0 * n) * penalty
}

fn gradients(
    m: &LrModel,
    x: ArrayView2<'_, f64>,
    y: &[usize],
    l2: f64,
) -> (Array2<f64>, Vec<f64>) {
    let n = x.nrows() as f64;
    let k = m.bias.len();
    let mut grad_w = Array2::zeros(m.weights.raw_dim());
    let mut grad_b = vec![0.0; k];
    for (r, row) in x.rows().into_iter().enumerate() {
        let mut delta = m.proba_row(row);
        delta[y[r]] -= 1.0;
        for (j, &xj) in row.iter().enumerate() {
            for (c, &d) in delta.iter().enumerate() {
                grad_w[[j, c]] += xj * d;
            }
        }
        for (c, &d) in delta.iter().enumerate() {
            grad_b[c] += d;
        }
    }
    grad_w.mapv_inplace(|g| g / n);
    grad_w.zip_mut_with(&m.weights, |g, w| *g += l2 / n * w);
    for g in grad_b.iter_mut() {
        *g /= n;
    }
    (grad_w, grad_b)
}

impl LrModel {
    pub(crate) fn proba_row(&self, row: ArrayView1<'_, f64>) -> Vec<f64> {
        let k = self.bias.len();
        let mut z = self.bias.clone();
        for (j, &xj) in row.iter().enumerate() {
            for (c, zc) in z.iter_mut().enumerate().take(k) {
                *zc += xj * self.weights[[j, c]];
            }
        }
        softmax_in_place(&mut z);
        z
    }
}
