//! Decision trees: classification (entropy/Gini) and regression
//! (Friedman-MSE), shared by the DT, RF, and GB models.
//!
//! Splits use midpoint thresholds between consecutive distinct values with
//! the `value <= threshold` convention. Candidates are scanned in ascending
//! feature-index and threshold order and replaced only on strict improvement,
//! so ties always resolve to the lowest feature index, then lowest threshold.

use super::{Criterion, DtParams};
use crate::rng;
use ndarray::{ArrayView1, ArrayView2};
use rand_chacha::ChaCha8Rng;

/// Margin a candidate must beat the incumbent by to replace it; absorbs
/// float noise in impurity sums so conceptual ties keep the lowest feature
/// index and threshold. Splits themselves are allowed at zero gain (an
/// impure node with any distinct values will split), matching the reference
/// behavior that lets trees carve XOR-style interactions.
const GAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
enum CNode {
    Leaf {
        probs: Vec<f64>,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Arena-allocated classification tree.
#[derive(Debug, Clone)]
pub(crate) struct ClassTree {
    nodes: Vec<CNode>,
}

/// Which features a node's split search may consider.
pub(crate) enum FeaturePolicy<'a> {
    All,
    /// Sample `m` distinct features per node from the tree's RNG stream.
    Sample { m: usize, rng: &'a mut ChaCha8Rng },
}

pub(crate) fn fit_classifier(
    x: ArrayView2<'_, f64>,
    y: &[usize],
    n_classes: usize,
    params: &DtParams,
) -> ClassTree {
    let rows: Vec<usize> = (0..x.nrows()).collect();
    grow_classification(
        x,
        y,
        rows,
        n_classes,
        params.criterion,
        params.max_depth,
        params.min_samples_split,
        &mut FeaturePolicy::All,
    )
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn grow_classification(
    x: ArrayView2<'_, f64>,
    y: &[usize],
    rows: Vec<usize>,
    n_classes: usize,
    criterion: Criterion,
    max_depth: Option<usize>,
    min_samples_split: usize,
    policy: &mut FeaturePolicy<'_>,
) -> ClassTree {
    let mut tree = ClassTree { nodes: Vec::new() };
    grow_class_node(
        &mut tree, x, y, rows, n_classes, criterion, max_depth, min_samples_split, policy, 0,
    );
    tree
}

#[allow(clippy::too_many_arguments)]
fn grow_class_node(
    tree: &mut ClassTree,
    x: ArrayView2<'_, f64>,
    y: &[usize],
    rows: Vec<usize>,
    n_classes: usize,
    criterion: Criterion,
    max_depth: Option<usize>,
    min_samples_split: usize,
    policy: &mut FeaturePolicy<'_>,
    depth: usize,
) -> usize {
    let n = rows.len();
    let mut counts = vec![0usize; n_classes];
    for &r in &rows {
        counts[y[r]] += 1;
    }

    let make_leaf = |tree: &mut ClassTree| {
        let probs = counts.iter().map(|&c| c as f64 / n as f64).collect();
        tree.nodes.push(CNode::Leaf { probs });
        tree.nodes.len() - 1
    };

    let pure = counts.iter().any(|&c| c == n);
    let depth_capped = max_depth.is_some_and(|d| depth >= d);
    if pure || n < min_samples_split || depth_capped {
        return make_leaf(tree);
    }

    let candidates: Vec<usize> = match policy {
        FeaturePolicy::All => (0..x.ncols()).collect(),
        FeaturePolicy::Sample { m, rng } => {
            let mut picked = rng::sample_indices(x.ncols(), (*m).min(x.ncols()), rng);
            picked.sort_unstable();
            picked
        }
    };

    let parent_impurity = impurity(criterion, &counts, n);
    let mut best: Option<(usize, f64, f64)> = None; // (feature, threshold, gain)
    let mut sorted = rows.clone();
    for &f in &candidates {
        sorted.sort_by(|&a, &b| x[[a, f]].partial_cmp(&x[[b, f]]).unwrap());
        let mut left_counts = vec![0usize; n_classes];
        for i in 0..n - 1 {
            left_counts[y[sorted[i]]] += 1;
            let (a, b) = (x[[sorted[i], f]], x[[sorted[i + 1], f]]);
            if a == b {
                continue;
            }
            let nl = i + 1;
            let nr = n - nl;
            let right_counts: Vec<usize> = counts
                .iter()
                .zip(&left_counts)
                .map(|(&t, &l)| t - l)
                .collect();
            let weighted = (nl as f64 * impurity(criterion, &left_counts, nl)
                + nr as f64 * impurity(criterion, &right_counts, nr))
                / n as f64;
            let gain = parent_impurity - weighted;
            if best.is_none_or(|(_, _, g)| gain > g + GAIN_EPS) {
                let mut threshold = 0.5 * (a + b);
                if threshold >= b {
                    threshold = a; // midpoint rounded up to b; fall back to a
                }
                best = Some((f, threshold, gain));
            }
        }
    }

    let Some((feature, threshold, _)) = best else {
        return make_leaf(tree);
    };

    let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
        rows.iter().partition(|&&r| x[[r, feature]] <= threshold);
    let slot = tree.nodes.len();
    tree.nodes.push(CNode::Leaf { probs: Vec::new() }); // placeholder
    let left = grow_class_node(
        tree, x, y, left_rows, n_classes, criterion, max_depth, min_samples_split, policy,
        depth + 1,
    );
    let right = grow_class_node(
        tree, x, y, right_rows, n_classes, criterion, max_depth, min_samples_split, policy,
        depth + 1,
    );
    tree.nodes[slot] = CNode::Split {
        feature,
        threshold,
        left,
        right,
    };
    slot
}

fn impurity(criterion: Criterion, counts: &[usize], n: usize) -> f64 {
    let n = n as f64;
    match criterion {
        Criterion::Entropy => counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum(),
        Criterion::Gini => {
            1.0 - counts
                .iter()
                .map(|&c| {
                    let p = c as f64 / n;
                    p * p
                })
                .sum::<f64>()
        }
    }
}

impl ClassTree {
    pub(crate) fn proba_row(&self, row: ArrayView1<'_, f64>) -> Vec<f64> {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                CNode::Leaf { probs } => return probs.clone(),
                CNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub(crate) fn vote(&self, row: ArrayView1<'_, f64>) -> usize {
        super::argmax_tie_lowest(&self.proba_row(row))
    }

    /// Feature indices appearing in any split; used by attribution tests.
    pub fn split_features(&self) -> Vec<usize> {
        let mut used: Vec<usize> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                CNode::Split { feature, .. } => Some(*feature),
                CNode::Leaf { .. } => None,
            })
            .collect();
        used.sort_unstable();
        used.dedup();
        used
    }
}

#[derive(Debug, Clone)]
enum RNode {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Arena-allocated regression tree with Newton-step leaf values.
#[derive(Debug, Clone)]
pub(crate) struct RegTree {
    nodes: Vec<RNode>,
}

/// Grow a Friedman-MSE regression tree over `targets` (gradient residuals),
/// with leaf values `sum(targets) / sum(hessians)` on each leaf's rows.
pub(crate) fn grow_regression(
    x: ArrayView2<'_, f64>,
    targets: &[f64],
    hessians: &[f64],
    rows: Vec<usize>,
    max_depth: usize,
    min_samples_split: usize,
) -> RegTree {
    let mut tree = RegTree { nodes: Vec::new() };
    grow_reg_node(
        &mut tree, x, targets, hessians, rows, max_depth, min_samples_split, 0,
    );
    tree
}

#[allow(clippy::too_many_arguments)]
fn grow_reg_node(
    tree: &mut RegTree,
    x: ArrayView2<'_, f64>,
    targets: &[f64],
    hessians: &[f64],
    rows: Vec<usize>,
    max_depth: usize,
    min_samples_split: usize,
    depth: usize,
) -> usize {
    let n = rows.len();
    let make_leaf = |tree: &mut RegTree| {
        let num: f64 = rows.iter().map(|&r| targets[r]).sum();
        let den: f64 = rows.iter().map(|&r| hessians[r]).sum();
        let value = if den.abs() < 1e-150 { 0.0 } else { num / den };
        tree.nodes.push(RNode::Leaf { value });
        tree.nodes.len() - 1
    };

    if depth >= max_depth || n < min_samples_split {
        return make_leaf(tree);
    }
    // A node whose targets are (numerically) constant is pure.
    let total: f64 = rows.iter().map(|&r| targets[r]).sum();
    let mean = total / n as f64;
    let variance: f64 = rows
        .iter()
        .map(|&r| (targets[r] - mean) * (targets[r] - mean))
        .sum::<f64>()
        / n as f64;
    if variance < 1e-24 {
        return make_leaf(tree);
    }

    // Friedman's improvement: (nl * nr / n) * (mean_l - mean_r)^2.
    let mut best: Option<(usize, f64, f64)> = None;
    let mut sorted = rows.clone();
    for f in 0..x.ncols() {
        sorted.sort_by(|&a, &b| x[[a, f]].partial_cmp(&x[[b, f]]).unwrap());
        let mut left_sum = 0.0;
        for i in 0..n - 1 {
            left_sum += targets[sorted[i]];
            let (a, b) = (x[[sorted[i], f]], x[[sorted[i + 1], f]]);
            if a == b {
                continue;
            }
            let nl = (i + 1) as f64;
            let nr = (n - i - 1) as f64;
            let diff = left_sum / nl - (total - left_sum) / nr;
            let improvement = nl * nr / (nl + nr) * diff * diff;
            if best.is_none_or(|(_, _, g)| improvement > g + GAIN_EPS) {
                let mut threshold = 0.5 * (a + b);
                if threshold >= b {
                    threshold = a;
                }
                best = Some((f, threshold, improvement));
            }
        }
    }

    let Some((feature, threshold, _)) = best else {
        return make_leaf(tree);
    };

    let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
        rows.iter().partition(|&&r| x[[r, feature]] <= threshold);
    let slot = tree.nodes.len();
    tree.nodes.push(RNode::Leaf { value: 0.0 });
    let left = grow_reg_node(
        tree, x, targets, hessians, left_rows, max_depth, min_samples_split, depth + 1,
    );
    let right = grow_reg_node(
        tree, x, targets, hessians, right_rows, max_depth, min_samples_split, depth + 1,
    );
    tree.nodes[slot] = RNode::Split {
        feature,
        threshold,
        left,
        right,
    };
    slot
}

impl RegTree {
    pub(crate) fn value_row(&self, row: ArrayView1<'_, f64>) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                RNode::Leaf { value } => return *value,
                RNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}
