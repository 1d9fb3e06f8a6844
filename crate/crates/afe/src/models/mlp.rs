//! One-hidden-layer perceptron: ReLU hidden units, softmax output,
//! cross-entropy loss, Adam updates over seeded mini-batches.
//!
//! Weights use Glorot-uniform initialization from a derived stream; batch
//! order reshuffles per epoch from another stream. Training stops early
//! when the epoch loss stops improving (loss-stagnation rule).

use super::{softmax_in_place, MlpParams, ModelError};
use crate::rng;
use ndarray::{Array2, ArrayView1, ArrayView2};
use rand::Rng;

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

#[derive(Debug, Clone)]
pub(crate) struct MlpModel {
    /// `p x h`, row-major.
    pub(crate) w1: Array2<f64>,
    pub(crate) b1: Vec<f64>,
    /// `h x k`, row-major.
    pub(crate) w2: Array2<f64>,
    pub(crate) b2: Vec<f64>,
}

struct Grads {
    w1: Array2<f64>,
    b1: Vec<f64>,
    w2: Array2<f64>,
    b2: Vec<f64>,
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    fn new(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
        }
    }

    fn update(&mut self, params: &mut [f64], grads: &[f64], lr: f64) {
        let bc1 = 1.0 - BETA1.powi(self.t);
        let bc2 = 1.0 - BETA2.powi(self.t);
        for ((w, &g), (m, v)) in params
            .iter_mut()
            .zip(grads)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            *m = BETA1 * *m + (1.0 - BETA1) * g;
            *v = BETA2 * *v + (1.0 - BETA2) * g * g;
            let mhat = *m / bc1;
            let vhat = *v / bc2;
            *w -= lr * mhat / (vhat.sqrt() + ADAM_EPS);
        }
    }
}

pub(crate) fn fit(
    x: ArrayView2<'_, f64>,
    y: &[usize],
    n_classes: usize,
    params: &MlpParams,
    seed: u64,
) -> Result<MlpModel, ModelError> {
    let (n, p) = (x.nrows(), x.ncols());
    let h = params.hidden;
    let mut model = MlpModel {
        w1: glorot(p, h, rng::stream(seed, "mlp-init", 0)),
        b1: vec![0.0; h],
        w2: glorot(h, n_classes, rng::stream(seed, "mlp-init", 1)),
        b2: vec![0.0; n_classes],
    };

    let mut adam_w1 = Adam::new(p * h);
    let mut adam_b1 = Adam::new(h);
    let mut adam_w2 = Adam::new(h * n_classes);
    let mut adam_b2 = Adam::new(n_classes);

    let mut best_loss = f64::INFINITY;
    let mut stagnant = 0usize;
    for epoch in 0..params.epochs {
        let mut order: Vec<usize> = (0..n).collect();
        let mut shuffle_stream = rng::stream(seed, "mlp-shuffle", epoch as u64);
        rng::shuffle(&mut order, &mut shuffle_stream);

        let mut epoch_loss = 0.0;
        for batch in order.chunks(params.batch) {
            let (grads, loss) = batch_gradients(&model, x, y, batch);
            epoch_loss += loss * batch.len() as f64;

            adam_w1.t += 1;
            adam_b1.t += 1;
            adam_w2.t += 1;
            adam_b2.t += 1;
            adam_w1.update(
                model.w1.as_slice_mut().expect("row-major"),
                grads.w1.as_slice().expect("row-major"),
                params.lr,
            );
            adam_b1.update(&mut model.b1, &grads.b1, params.lr);
            adam_w2.update(
                model.w2.as_slice_mut().expect("row-major"),
                grads.w2.as_slice().expect("row-major"),
                params.lr,
            );
            adam_b2.update(&mut model.b2, &grads.b2, params.lr);
        }
        epoch_loss /= n as f64;
        if !epoch_loss.is_finite() {
            return Err(ModelError::NonFinite);
        }

        if epoch_loss > best_loss - params.tol {
            stagnant += 1;
        } else {
            stagnant = 0;
        }
        if epoch_loss < best_loss {
            best_loss = epoch_loss;
        }
        if stagnant >= params.patience {
            break;
        }
    }
    Ok(model)
}

fn glorot(fan_in: usize, fan_out: usize, mut stream: rand_chacha::ChaCha8Rng) -> Array2<f64> {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    Array2::from_shape_fn((fan_in, fan_out), |_| stream.gen_range(-limit..limit))
}

/// Mean loss and mean gradients over the given rows, evaluated at the
/// current parameters (before any update).
fn batch_gradients(
    m: &MlpModel,
    x: ArrayView2<'_, f64>,
    y: &[usize],
    rows: &[usize],
) -> (Grads, f64) {
    let p = m.w1.nrows();
    let h = m.b1.len();
    let k = m.b2.len();
    let w1 = m.w1.as_slice().expect("row-major");
    let w2 = m.w2.as_slice().expect("row-major");

    let mut grads = Grads {
        w1: Array2::zeros((p, h)),
        b1: vec![0.0; h],
        w2: Array2::zeros((h, k)),
        b2: vec![0.0; k],
    };
    let gw1 = grads.w1.as_slice_mut().expect("row-major");
    let gw2 = grads.w2.as_slice_mut().expect("row-major");

    let mut total_loss = 0.0;
    let mut z1 = vec![0.0; h];
    let mut a1 = vec![0.0; h];
    let mut delta_h = vec![0.0; h];
    for &r in rows {
        let row = x.row(r);

        z1.copy_from_slice(&m.b1);
        for (i, &xi) in row.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (zj, &wij) in z1.iter_mut().zip(&w1[i * h..(i + 1) * h]) {
                *zj += xi * wij;
            }
        }
        for (aj, &zj) in a1.iter_mut().zip(&z1) {
            *aj = if zj > 0.0 { zj } else { 0.0 };
        }

        let mut probs = m.b2.clone();
        for (j, &aj) in a1.iter().enumerate() {
            if aj == 0.0 {
                continue;
            }
            for (pc, &wjc) in probs.iter_mut().zip(&w2[j * k..(j + 1) * k]) {
                *pc += aj * wjc;
            }
        }
        softmax_in_place(&mut probs);
        total_loss -= probs[y[r]].max(1e-300).ln();

        // probs becomes delta_out in place.
        probs[y[r]] -= 1.0;
        for (j, &aj) in a1.iter().enumerate() {
            delta_h[j] = 0.0;
            if z1[j] > 0.0 {
                let wrow = &w2[j * k..(j + 1) * k];
                let grow = &mut gw2[j * k..(j + 1) * k];
                for (c, &d) in probs.iter().enumerate() {
                    delta_h[j] += wrow[c] * d;
                    grow[c] += aj * d;
                }
            }
        }
        for (gb, &d) in grads.b2.iter_mut().zip(&probs) {
            *gb += d;
        }
        for (i, &xi) in row.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let grow = &mut gw1[i * h..(i + 1) * h];
            for (g, &d) in grow.iter_mut().zip(&delta_h) {
                *g += xi * d;
            }
        }
        for (gb, &d) in grads.b1.iter_mut().zip(&delta_h) {
            *gb += d;
        }
    }

    let scale = 1.0 / rows.len() as f64;
    for g in gw1.iter_mut() {
        *g *= scale;
    }
    for g in gw2.iter_mut() {
        *g *= scale;
    }
    for g in grads.b1.iter_mut().chain(grads.b2.iter_mut()) {
        *g *= scale;
    }
    (grads, total_loss * scale)
}

#[cfg(test)]
fn batch_loss(m: &MlpModel, x: ArrayView2<'_, f64>, y: &[usize], rows: &[usize]) -> f64 {
    let mut total = 0.0;
    for &r in rows {
        let probs = m.proba_row(x.row(r));
        total -= probs[y[r]].max(1e-300).ln();
    }
    total / rows.len() as f64
}

impl MlpModel {
    pub(crate) fn proba_row(&self, row: ArrayView1<'_, f64>) -> Vec<f64> {
        let h = self.b1.len();
        let k = self.b2.len();
        let w1 = self.w1.as_slice().expect("row-major");
        let w2 = self.w2.as_slice().expect("row-major");

        let mut z1 = self.b1.clone();
        for (i, &xi) in row.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (zj, &wij) in z1.iter_mut().zip(&w1[i * h..(i + 1) * h]) {
                *zj += xi * wij;
            }
        }
        let mut out = self.b2.clone();
        for (j, &zj) in z1.iter().enumerate() {
            if zj <= 0.0 {
                continue;
            }
            for (oc, &wjc) in out.iter_mut().zip(&w2[j * k..(j + 1) * k]) {
                *oc += zj * wjc;
            }
        }
        softmax_in_place(&mut out);
        out
    }
}
