//! Planted-signal synthetic datasets used as selection oracles in tests.

use super::DataMatrix;
use crate::rng;
use ndarray::Array2;
use rand::Rng;

/// Fraction of labels flipped after the deterministic label function. The
/// flip count is exact (`floor(rate * n)`), so the noise bound always holds.
const FLIP_RATE: f64 = 0.02;

/// Generate an `n x (informative + noise)` matrix whose binary label is the
/// majority vote of the binary informative columns (ties count as 1, so a
/// single column is copied verbatim and two columns behave as a logical OR),
/// with a 2% exact label-flip budget. Noise columns are uniform reals
/// independent of the label.
///
/// Every informative bit carries marginal signal on its own while the exact
/// label needs all of them, which is what makes the planted set recoverable
/// by greedy learners yet still a meaningful target for subset search.
///
/// Columns are named `f0..` (informative) then `n0..` (noise). Requires
/// `informative >= 1` and `n >= 4 * (informative + noise)`.
pub fn synth_dataset(n: usize, informative: usize, noise: usize, seed: u64) -> DataMatrix {
    assert!(informative >= 1, "need at least one informative column");
    let p = informative + noise;
    assert!(n >= 4 * p, "need n >= 4 * (informative + noise) = {}", 4 * p);

    let mut features = Array2::zeros((n, p));
    for c in 0..informative {
        let mut stream = rng::stream(seed, "synth-informative", c as u64);
        for r in 0..n {
            features[[r, c]] = f64::from(stream.gen_range(0..2u8));
        }
    }
    for c in 0..noise {
        let mut stream = rng::stream(seed, "synth-noise", c as u64);
        for r in 0..n {
            features[[r, informative + c]] = stream.gen_range(0.0..1.0);
        }
    }

    let mut labels: Vec<usize> = (0..n)
        .map(|r| {
            let ones: usize = (0..informative).filter(|&c| features[[r, c]] == 1.0).count();
            usize::from(2 * ones >= informative)
        })
        .collect();

    let flips = (FLIP_RATE * n as f64).floor() as usize;
    let mut stream = rng::stream(seed, "synth-flip", 0);
    for r in rng::sample_indices(n, flips, &mut stream) {
        labels[r] = 1 - labels[r];
    }

    let names = (0..informative)
        .map(|c| format!("f{c}"))
        .chain((0..noise).map(|c| format!("n{c}")))
        .collect();
    DataMatrix::new(features, names, labels, 2).expect("generated matrix is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_determinism() {
        let a = synth_dataset(200, 2, 6, 1);
        assert_eq!(a.n_rows(), 200);
        assert_eq!(a.n_features(), 8);
        assert_eq!(a.feature_names()[0], "f0");
        assert_eq!(a.feature_names()[2], "n0");
        let b = synth_dataset(200, 2, 6, 1);
        assert_eq!(a, b);
    }

    #[test]
    fn label_is_majority_vote_up_to_flip_budget() {
        let d = synth_dataset(500, 2, 2, 3);
        let mismatches = (0..d.n_rows())
            .filter(|&r| {
                let vote = usize::from(d.features()[[r, 0]] == 1.0 || d.features()[[r, 1]] == 1.0);
                vote != d.labels()[r]
            })
            .count();
        assert_eq!(mismatches, 10); // floor(0.02 * 500)
    }

    #[test]
    fn single_informative_column_is_copied() {
        let d = synth_dataset(250, 1, 1, 9);
        let mismatches = (0..d.n_rows())
            .filter(|&r| (d.features()[[r, 0]] as usize) != d.labels()[r])
            .count();
        assert_eq!(mismatches, 5); // floor(0.02 * 250)
    }

    #[test]
    fn permuting_a_noise_column_never_changes_the_label_function() {
        let d = synth_dataset(120, 2, 3, 7);
        let label_fn = |m: &ndarray::Array2<f64>, r: usize| -> usize {
            usize::from(m[[r, 0]] == 1.0 || m[[r, 1]] == 1.0)
        };
        let mut permuted = d.features().to_owned();
        let reversed: Vec<f64> = permuted.column(3).iter().rev().copied().collect();
        for (r, v) in reversed.into_iter().enumerate() {
            permuted[[r, 3]] = v;
        }
        let original = d.features().to_owned();
        for r in 0..d.n_rows() {
            assert_eq!(label_fn(&original, r), label_fn(&permuted, r));
        }
    }

    #[test]
    fn noise_columns_near_zero_mutual_information() {
        let d = synth_dataset(200, 2, 6, 1);
        for c in 2..d.n_features() {
            let mi = binned_mi(&d, c, 4);
            assert!(mi < 0.02, "column {c} has MI {mi}");
        }
    }

    /// Miller-Madow mutual information in bits between an equal-width
    /// binning of column `c` and the label (plug-in estimate minus the
    /// standard small-sample bias term).
    fn binned_mi(d: &DataMatrix, c: usize, bins: usize) -> f64 {
        let features = d.features();
        let col = features.column(c);
        let (lo, hi) = col
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let width = (hi - lo) / bins as f64;
        let mut joint = vec![vec![0usize; d.n_classes()]; bins];
        for (r, &v) in col.iter().enumerate() {
            let b = (((v - lo) / width) as usize).min(bins - 1);
            joint[b][d.labels()[r]] += 1;
        }
        let n = d.n_rows() as f64;
        let mut mi = 0.0;
        for b in 0..bins {
            let pb: usize = joint[b].iter().sum();
            for y in 0..d.n_classes() {
                let pby = joint[b][y];
                if pby == 0 {
                    continue;
                }
                let py: usize = joint.iter().map(|row| row[y]).sum();
                let pxy = pby as f64 / n;
                mi += pxy * (pxy / ((pb as f64 / n) * (py as f64 / n))).log2();
            }
        }
        let bias = ((bins - 1) * (d.n_classes() - 1)) as f64 / (2.0 * n * std::f64::consts::LN_2);
        (mi - bias).max(0.0)
    }
}
