//! Random forest: bagged classification trees with per-split feature
//! sampling and majority voting.
//!
//! Each tree owns an RNG stream derived from (seed, "rf-tree", index), so
//! bootstrap draws and feature subsets are identical whether trees train
//! sequentially or in parallel.

use super::{tree, ClassTree, RfParams};
use crate::rng;
use ndarray::{ArrayView1, ArrayView2};
use rand::Rng;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub(crate) struct ForestModel {
    trees: Vec<ClassTree>,
    n_classes: usize,
}

pub(crate) fn fit(
    x: ArrayView2<'_, f64>,
    y: &[usize],
    n_classes: usize,
    params: &RfParams,
    seed: u64,
) -> ForestModel {
    let n = x.nrows();
    let m = params
        .max_features
        .unwrap_or_else(|| (x.ncols() as f64).sqrt().ceil() as usize)
        .clamp(1, x.ncols());

    let trees: Vec<ClassTree> = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut stream = rng::stream(seed, "rf-tree", t as u64);
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| stream.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            tree::grow_classification(
                x,
                y,
                rows,
                n_classes,
                params.criterion,
                params.max_depth,
                params.min_samples_split,
                &mut tree::FeaturePolicy::Sample {
                    m,
                    rng: &mut stream,
                },
            )
        })
        .collect();

    ForestModel { trees, n_classes }
}

impl ForestModel {
    /// Vote fractions: each tree casts one vote for its predicted class.
    pub(crate) fn proba_row(&self, row: ArrayView1<'_, f64>) -> Vec<f64> {
        let mut votes = vec![0usize; self.n_classes];
        for tree in &self.trees {
            votes[tree.vote(row)] += 1;
        }
        votes
            .into_iter()
            .map(|v| v as f64 / self.trees.len() as f64)
            .collect()
    }
}
