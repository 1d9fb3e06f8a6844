//! Seeded stratified train/test splitting.

use super::{DataError, DataMatrix};
use crate::rng;

/// A stratified train/test partition plus the parameters that produced it.
#[derive(Debug, Clone)]
pub struct SplitPair {
    pub train: DataMatrix,
    pub test: DataMatrix,
    pub seed: u64,
    pub ratio: f64,
}

/// Partition `d` into train/test with per-class proportions preserved to
/// within one sample. Each class keeps at least one row on each side.
/// Deterministic for a fixed seed regardless of thread count.
pub fn stratified_split(d: &DataMatrix, ratio: f64, seed: u64) -> Result<SplitPair, DataError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(DataError::RatioOutOfRange(ratio));
    }
    let counts = d.class_counts();
    if let Some(class) = counts.iter().position(|&c| c == 1) {
        return Err(DataError::SingleSampleClass(class));
    }

    let mut train_rows: Vec<usize> = Vec::new();
    let mut test_rows: Vec<usize> = Vec::new();
    for class in 0..d.n_classes() {
        let mut members: Vec<usize> = (0..d.n_rows())
            .filter(|&r| d.labels()[r] == class)
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut stream = rng::stream(seed, "split-class", class as u64);
        rng::shuffle(&mut members, &mut stream);
        // Round half up, then clamp so both sides keep at least one row.
        let want = (ratio * members.len() as f64 + 0.5).floor() as usize;
        let take = want.clamp(1, members.len() - 1);
        train_rows.extend_from_slice(&members[..take]);
        test_rows.extend_from_slice(&members[take..]);
    }

    // Present both sides in source row order so downstream iteration is
    // independent of class enumeration order.
    train_rows.sort_unstable();
    test_rows.sort_unstable();

    Ok(SplitPair {
        train: d.select_rows(&train_rows)?,
        test: d.select_rows(&test_rows)?,
        seed,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn balanced(n: usize) -> DataMatrix {
        let features = Array2::from_shape_fn((n, 2), |(r, c)| (r * 2 + c) as f64);
        let labels = (0..n).map(|r| r % 2).collect();
        DataMatrix::new(features, vec!["a".into(), "b".into()], labels, 2).unwrap()
    }

    #[test]
    fn exact_stratification_on_balanced_classes() {
        let d = balanced(100);
        let pair = stratified_split(&d, 0.7, 0).unwrap();
        assert_eq!(pair.train.n_rows(), 70);
        assert_eq!(pair.test.n_rows(), 30);
        assert_eq!(pair.train.class_counts(), vec![35, 35]);
        assert_eq!(pair.test.class_counts(), vec![15, 15]);
    }

    #[test]
    fn same_seed_reproduces_partition() {
        let d = balanced(60);
        let a = stratified_split(&d, 0.7, 9).unwrap();
        let b = stratified_split(&d, 0.7, 9).unwrap();
        assert_eq!(a.train, b.train);
        assert_eq!(a.test, b.test);
    }

    #[test]
    fn partition_is_disjoint_and_complete() {
        let d = balanced(57);
        let pair = stratified_split(&d, 0.3, 4).unwrap();
        assert_eq!(pair.train.n_rows() + pair.test.n_rows(), d.n_rows());
        // Row features are unique by construction, so feature sums detect
        // duplication or loss.
        let total: f64 = d.features().iter().sum();
        let split_total: f64 =
            pair.train.features().iter().sum::<f64>() + pair.test.features().iter().sum::<f64>();
        assert_eq!(total, split_total);
    }

    #[test]
    fn per_class_counts_within_one_of_ratio() {
        let mut labels = vec![0usize; 41];
        labels.extend(vec![1usize; 17]);
        labels.extend(vec![2usize; 9]);
        let n = labels.len();
        let features = Array2::from_shape_fn((n, 1), |(r, _)| r as f64);
        let d = DataMatrix::new(features, vec!["x".into()], labels, 3).unwrap();
        let pair = stratified_split(&d, 0.7, 1).unwrap();
        for (class, &total) in d.class_counts().iter().enumerate() {
            let train = pair.train.class_counts()[class] as f64;
            assert!((train - 0.7 * total as f64).abs() <= 1.0);
        }
    }

    #[test]
    fn rejects_bad_ratio_and_singleton_class() {
        let d = balanced(10);
        assert!(matches!(
            stratified_split(&d, 1.0, 0),
            Err(DataError::RatioOutOfRange(_))
        ));
        let features = Array2::from_shape_fn((3, 1), |(r, _)| r as f64);
        let singleton =
            DataMatrix::new(features, vec!["x".into()], vec![0, 0, 1], 2).unwrap();
        assert!(matches!(
            stratified_split(&singleton, 0.5, 0),
            Err(DataError::SingleSampleClass(1))
        ));
    }
}
