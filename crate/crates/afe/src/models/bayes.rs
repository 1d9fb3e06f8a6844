//! Gaussian naive Bayes: per-class feature Gaussians with class priors.
//!
//! Variances are population variances per class, smoothed by
//! `var_smoothing * max column variance` of the whole training set so
//! constant columns stay well-defined.

use super::{softmax_in_place, GnbParams};
use ndarray::{Array2, ArrayView1, ArrayView2};

#[derive(Debug, Clone)]
pub(crate) struct GnbModel {
    /// `k x p` per-class feature means.
    means: Array2<f64>,
    /// `k x p` smoothed per-class feature variances.
    variances: Array2<f64>,
    log_priors: Vec<f64>,
}

pub(crate) fn fit(
    x: ArrayView2<'_, f64>,
    y: &[usize],
    n_classes: usize,
    params: &GnbParams,
) -> GnbModel {
    let (n, p) = (x.nrows(), x.ncols());

    // Global column variances set the smoothing floor.
    let mut max_var: f64 = 0.0;
    for c in 0..p {
        let col = x.column(c);
        let mean = col.sum() / n as f64;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        max_var = max_var.max(var);
    }
    let epsilon = (params.var_smoothing * max_var).max(1e-300);

    let mut counts = vec![0usize; n_classes];
    let mut means = Array2::zeros((n_classes, p));
    for (r, row) in x.rows().into_iter().enumerate() {
        counts[y[r]] += 1;
        for (c, &v) in row.iter().enumerate() {
            means[[y[r], c]] += v;
        }
    }
    for k in 0..n_classes {
        if counts[k] > 0 {
            for c in 0..p {
                means[[k, c]] /= counts[k] as f64;
            }
        }
    }

    let mut variances = Array2::zeros((n_classes, p));
    for (r, row) in x.rows().into_iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let d = v - means[[y[r], c]];
            variances[[y[r], c]] += d * d;
        }
    }
    for k in 0..n_classes {
        for c in 0..p {
            if counts[k] > 0 {
                variances[[k, c]] /= counts[k] as f64;
            }
            variances[[k, c]] += epsilon;
        }
    }

    let log_priors = counts
        .iter()
        .map(|&c| {
            if c == 0 {
                f64::NEG_INFINITY
            } else {
                (c as f64 / n as f64).ln()
            }
        })
        .collect();

    GnbModel {
        means,
        variances,
        log_priors,
    }
}

impl GnbModel {
    pub(crate) fn proba_row(&self, row: ArrayView1<'_, f64>) -> Vec<f64> {
        let k = self.log_priors.len();
        let mut logp = self.log_priors.clone();
        for (class, lp) in logp.iter_mut().enumerate().take(k) {
            if !lp.is_finite() {
                continue; // class absent from training; stays at -inf
            }
            for (c, &v) in row.iter().enumerate() {
                let var = self.variances[[class, c]];
                let d = v - self.means[[class, c]];
                *lp += -0.5 * (2.0 * std::f64::consts::PI * var).ln() - d * d / (2.0 * var);
            }
        }
        softmax_in_place(&mut logp);
        logp
    }
}
